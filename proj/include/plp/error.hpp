//
// Copyright (c) 2026 The credal-plp authors
//
// Permission is hereby granted, free of charge, to any person obtaining a copy
// of this software and associated documentation files (the "Software"), to
// deal in the Software without restriction, including without limitation the
// rights to use, copy, modify, merge, publish, distribute, sublicense, and/or
// sell copies of the Software, and to permit persons to whom the Software is
// furnished to do so, subject to the following conditions:
//
// The above copyright notice and this permission notice shall be included in
// all copies or substantial portions of the Software.
//
// THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
// IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
// FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
// AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
// LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING
// FROM, OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS
// IN THE SOFTWARE.
//

#pragma once

#include <stdexcept>
#include <string>

namespace plp {

/// Stable process exit codes; every library error maps onto one of them.
enum class ExitCode : int {
    success = 0,
    user_error = 1,
    resource_limit = 2,
    inconsistent = 3,
};

class Error : public std::runtime_error {
public:
    Error(ExitCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ExitCode code() const noexcept { return code_; }

private:
    ExitCode code_;
};

/// Malformed input: program text, query text, assignments, CLI arguments.
class InputError : public Error {
public:
    explicit InputError(const std::string& what) : Error(ExitCode::user_error, what) {}
};

/// A configurable cap (ground rules, choice points, oracle atoms, BN parents) was exceeded.
class ResourceLimitError : public Error {
public:
    explicit ResourceLimitError(const std::string& what) : Error(ExitCode::resource_limit, what) {}
};

/// An operation was applied outside its domain (e.g. least model of a non-definite program).
class PreconditionError : public Error {
public:
    explicit PreconditionError(const std::string& what) : Error(ExitCode::user_error, what) {}
};

class NotAcyclicError : public Error {
public:
    explicit NotAcyclicError(const std::string& what) : Error(ExitCode::user_error, what) {}
};

} // namespace plp
