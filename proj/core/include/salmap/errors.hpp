#pragma once

#include <stdexcept>
#include <string>

namespace salmap {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class IoErrorKind {
    Unreadable,         // file missing or not openable
    Decode,             // truncated or corrupt stream
    UnsupportedFormat,  // bit depth / channel layout we do not accept
    ZeroDimension,      // decoded width or height is zero
    MultiChannel,       // single-channel input required
    Unwritable,         // output path cannot be written
};

class IoError : public Error {
public:
    IoError(IoErrorKind kind, std::string path, const std::string& detail);

    IoErrorKind kind() const noexcept { return kind_; }
    const std::string& path() const noexcept { return path_; }

private:
    IoErrorKind kind_;
    std::string path_;
};

/// Rasters that must share dimensions do not.
class DimensionMismatch : public Error {
public:
    using Error::Error;
    DimensionMismatch(int expected_w, int expected_h, int got_w, int got_h,
                      const std::string& what_for);
};

/// A parameter violates its documented invariant; the message names it.
class InvalidParam : public Error {
public:
    using Error::Error;
};

}  // namespace salmap
