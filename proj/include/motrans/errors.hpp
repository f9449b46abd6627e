#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace motrans {

/// Data or validation problem (bad file, bad shape, bad argument).
/// The CLI maps these to exit code 2.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Unrecoverable runtime failure (training divergence, unstable simulation).
/// The CLI maps these to exit code 3.
class RuntimeFailure : public std::runtime_error {
public:
    explicit RuntimeFailure(const std::string& msg) : std::runtime_error(msg) {}
};

class MissingFile : public DataError {
public:
    explicit MissingFile(const std::string& path)
        : DataError("MissingFile: " + path) {}
};

class IoFailure : public DataError {
public:
    explicit IoFailure(const std::string& detail)
        : DataError("IoFailure: " + detail) {}
};

class MalformedRow : public DataError {
public:
    MalformedRow(std::size_t line, const std::string& detail)
        : DataError("MalformedRow: line " + std::to_string(line) + ": " + detail),
          line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class NonMonotonicTime : public DataError {
public:
    explicit NonMonotonicTime(std::size_t line)
        : DataError("NonMonotonicTime: line " + std::to_string(line)), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class TooShort : public DataError {
public:
    explicit TooShort(const std::string& detail)
        : DataError("TooShort: " + detail) {}
};

class TrajectoryShorterThanWindow : public DataError {
public:
    TrajectoryShorterThanWindow(std::size_t length, std::size_t window)
        : DataError("TrajectoryShorterThanWindow: length " + std::to_string(length) +
                    " < window " + std::to_string(window)) {}
};

class EmptySequence : public DataError {
public:
    EmptySequence() : DataError("EmptySequence: DTW input sequence is empty") {}
};

class EmptyChannelSet : public DataError {
public:
    EmptyChannelSet() : DataError("EmptyChannelSet: DTW channel subset is empty") {}
};

class EmptyList : public DataError {
public:
    explicit EmptyList(const std::string& which)
        : DataError("EmptyList: " + which) {}
};

class InvalidDims : public DataError {
public:
    explicit InvalidDims(const std::string& detail)
        : DataError("InvalidDims: " + detail) {}
};

class InvalidParams : public DataError {
public:
    explicit InvalidParams(const std::string& detail)
        : DataError("InvalidParams: " + detail) {}
};

class ShapeMismatch : public DataError {
public:
    explicit ShapeMismatch(const std::string& detail)
        : DataError("ShapeMismatch: " + detail) {}
};

class StaleCache : public DataError {
public:
    explicit StaleCache(const std::string& detail)
        : DataError("StaleCache: " + detail) {}
};

class OverlapTooShort : public DataError {
public:
    explicit OverlapTooShort(std::size_t overlap)
        : DataError("OverlapTooShort: overlap " + std::to_string(overlap) +
                    " < 2 samples") {}
};

class CheckpointMismatch : public DataError {
public:
    explicit CheckpointMismatch(const std::string& detail)
        : DataError("CheckpointMismatch: " + detail) {}
};

class EmptyTrainingSet : public DataError {
public:
    EmptyTrainingSet() : DataError("EmptyTrainingSet: no window pairs to train on") {}
};

class DivergenceDetected : public RuntimeFailure {
public:
    explicit DivergenceDetected(std::size_t step)
        : RuntimeFailure("DivergenceDetected: non-finite loss at step " +
                         std::to_string(step)),
          step_(step) {}
    std::size_t step() const { return step_; }

private:
    std::size_t step_;
};

class UnstableSimulation : public RuntimeFailure {
public:
    UnstableSimulation(std::size_t step, double position)
        : RuntimeFailure("UnstableSimulation: |position| = " + std::to_string(position) +
                         " m at control step " + std::to_string(step)),
          step_(step) {}
    std::size_t step() const { return step_; }

private:
    std::size_t step_;
};

}  // namespace motrans
