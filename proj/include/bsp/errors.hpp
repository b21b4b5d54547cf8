#ifndef BSP_ERRORS_HPP
#define BSP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bsp {

// Malformed input files or schemas. CLI exit code 2.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Violated preconditions and out-of-domain arguments. CLI exit code 3.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Rank-deficient or under-determined least-squares systems. CLI exit code 4.
class RankError : public std::runtime_error {
 public:
  explicit RankError(const std::string& what) : std::runtime_error(what) {}
};

// A pipeline stage was left with too little data to continue. CLI exit code 5.
class PipelineError : public std::runtime_error {
 public:
  explicit PipelineError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace bsp

#endif  // BSP_ERRORS_HPP
