// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace ictrl {

struct Error : std::runtime_error {
    explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

struct DimensionMismatch : Error {
    explicit DimensionMismatch(const std::string &msg) : Error("DimensionMismatch: " + msg) {}
};

struct SingularMatrix : Error {
    explicit SingularMatrix(const std::string &msg) : Error("SingularMatrix: " + msg) {}
};

struct NotObservable : Error {
    explicit NotObservable(const std::string &msg) : Error("NotObservable: " + msg) {}
};

struct NotFullRowRank : Error {
    explicit NotFullRowRank(const std::string &msg) : Error("NotFullRowRank: " + msg) {}
};

struct InvalidPeriod : Error {
    explicit InvalidPeriod(const std::string &msg) : Error("InvalidPeriod: " + msg) {}
};

struct NotNilpotent : Error {
    explicit NotNilpotent(const std::string &msg) : Error("NotNilpotent: " + msg) {}
};

struct NonIntegerPlaintext : Error {
    explicit NonIntegerPlaintext(const std::string &msg) : Error("NonIntegerPlaintext: " + msg) {}
};

struct EmptyTrace : Error {
    explicit EmptyTrace(const std::string &msg) : Error("EmptyTrace: " + msg) {}
};

struct ParseError : Error {
    explicit ParseError(const std::string &msg) : Error("ParseError: " + msg) {}
};

// Name of the error category as used in CLI error documents and exit codes.
std::string error_code(const Error &e);

}  // namespace ictrl
