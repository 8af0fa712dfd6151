// SPDX-License-Identifier: Apache-2.0
//
// pfs-analytica: scheduled-SINR models and simulation of proportional fair OFDMA down-links
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <stdexcept>
#include <string>

namespace pfsa {

// Base of every error raised by the library. Callers that only need to tell
// configuration problems from numerical ones can catch ConfigError / NumericalError.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string &msg, std::string key = {})
        : Error(key.empty() ? msg : key + ": " + msg), key_(std::move(key)) {}
    const std::string &key() const noexcept { return key_; }

private:
    std::string key_;
};

class NumericalError : public Error {
public:
    using Error::Error;
};

class NonConvergence : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NonFinite : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// E[X] of the SINR diverges when the noise power is zero.
class DivergentMean : public DomainError {
public:
    using DomainError::DomainError;
};

class SchedulingUnderflow : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class DegenerateStd : public DomainError {
public:
    using DomainError::DomainError;
};

class EmptySubset : public DomainError {
public:
    using DomainError::DomainError;
};

class EnumerationTooLarge : public DomainError {
public:
    using DomainError::DomainError;
};

class InsufficientSamples : public DomainError {
public:
    using DomainError::DomainError;
};

class DigestMismatch : public Error {
public:
    using Error::Error;
};

} // namespace pfsa
