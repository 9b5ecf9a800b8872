#pragma once

#include <stdexcept>
#include <string>

namespace cvsnpm {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed inputs: bad indices, bad configuration values.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

// Data that fails the Dataset invariants (parse failures, constant
// columns, too few rows or variables, non-finite entries).
class DatasetError : public Error {
public:
    using Error::Error;
};

// Every triple was skipped, so the learner has nothing to report.
class EmptyResult : public Error {
public:
    using Error::Error;
};

} // namespace cvsnpm
