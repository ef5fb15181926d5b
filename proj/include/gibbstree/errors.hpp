#ifndef GIBBSTREE_ERRORS_HPP_
#define GIBBSTREE_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace gibbstree {

// Rejected energy model (D < 2, non-finite energies or beta, wrong length).
class InvalidModel : public std::invalid_argument {
 public:
  explicit InvalidModel(const std::string &what) : std::invalid_argument(what) {}
};

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string &what) : std::domain_error(what) {}
};

// Configured size or truncation limit exceeded.
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string &what) : std::runtime_error(what) {}
};

// Requested distribution has no (or no well-defined) support.
class SupportError : public std::runtime_error {
 public:
  explicit SupportError(const std::string &what) : std::runtime_error(what) {}
};

}  // namespace gibbstree

#endif  // GIBBSTREE_ERRORS_HPP_
