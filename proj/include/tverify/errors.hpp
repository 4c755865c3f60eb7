#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tverify {

// Base class for all failures raised by the library. Numeric anomalies are
// hard errors by design: a poisoned value must never flow into a destiny
// classification.
class SimError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class OverflowError : public SimError {
public:
    using SimError::SimError;
};

class NanError : public SimError {
public:
    using SimError::SimError;
};

class DomainError : public SimError {
public:
    using SimError::SimError;
};

class EmptyTrajectoryError : public SimError {
public:
    using SimError::SimError;
};

class UnsettledError : public SimError {
public:
    using SimError::SimError;
};

class SegmentTooShortError : public SimError {
public:
    using SimError::SimError;
};

class CollapseError : public SimError {
public:
    using SimError::SimError;
};

class TooFewSamplesError : public SimError {
public:
    using SimError::SimError;
};

class CsvError : public SimError {
public:
    CsvError(const std::string& msg, std::size_t row) : SimError(msg), row_(row) {}
    std::size_t row() const { return row_; }

private:
    std::size_t row_;
};

} // namespace tverify
