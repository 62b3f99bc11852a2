#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cl {

// Root of every error raised by the library. Each subclass maps to one
// named failure in the public contracts; callers switch on type.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t line, std::size_t column)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
          line_(line), column_(column), message_(message) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }
    const std::string& bare_message() const noexcept { return message_; }

private:
    std::size_t line_;
    std::size_t column_;
    std::string message_;
};

#define CL_DEFINE_ERROR(Name)                \
    class Name : public Error {              \
    public:                                  \
        using Error::Error;                  \
    };

// dataset
CL_DEFINE_ERROR(SchemaError)
CL_DEFINE_ERROR(ValueError)
CL_DEFINE_ERROR(MissingMetric)
CL_DEFINE_ERROR(UnsupportedMetric)
CL_DEFINE_ERROR(JoinError)
CL_DEFINE_ERROR(EmptyDataset)
// learn
CL_DEFINE_ERROR(EmptyTraining)
CL_DEFINE_ERROR(SingleClassTraining)
CL_DEFINE_ERROR(ArityMismatch)
CL_DEFINE_ERROR(VersionMismatch)
CL_DEFINE_ERROR(CorruptModel)
CL_DEFINE_ERROR(TooFewSamples)
CL_DEFINE_ERROR(InvalidArgument)
// eval
CL_DEFINE_ERROR(TooFewPerClass)
CL_DEFINE_ERROR(EmptyMatrix)
CL_DEFINE_ERROR(ZeroBaseline)
CL_DEFINE_ERROR(EmptySample)
// io
CL_DEFINE_ERROR(IoError)

#undef CL_DEFINE_ERROR

}  // namespace cl
