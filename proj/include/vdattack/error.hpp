/*
 * Copyright 2026 The vdattack Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace vdattack {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input file could not be parsed as the declared format.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Parsed data violates a domain invariant (wrong candidate count, dangling index, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A remote service (victim, provider, encoder, grammar checker) could not be reached.
class TransportError : public Error {
public:
    using Error::Error;
};

/// A remote service answered, but the answer breaks the wire protocol.
class ProtocolError : public Error {
public:
    using Error::Error;
};

/// Caller violated an operation precondition.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Numeric argument outside the function's domain (e.g. log of a non-positive probability).
class DomainError : public Error {
public:
    using Error::Error;
};

}  // namespace vdattack
