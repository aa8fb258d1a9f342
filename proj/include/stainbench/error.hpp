#pragma once

#include <stdexcept>
#include <string>

namespace stainbench {

/// Base of every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller violated an operation's precondition (bad channel count, even window, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Input data failed validation (malformed RLE runs, bad manifest rows).
class ValidationError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// The backend broke the wire contract (bad handshake, orphan id, non-JSON line).
class ProtocolError : public Error {
public:
    using Error::Error;
};

/// The backend answered a request with an error line.
class BackendError : public Error {
public:
    using Error::Error;
};

class TimeoutError : public Error {
public:
    using Error::Error;
};

} // namespace stainbench
