#pragma once

#include <stdexcept>
#include <string>

namespace planepart {

/// Argument outside the domain of a numeric routine.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Index or size outside what a table or mode supports.
class RangeError : public std::out_of_range {
public:
  using std::out_of_range::out_of_range;
};

/// A quadrature, series or root finder ran out of budget.
class NumericError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Table cache could not be read or written.
class CacheError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace planepart
