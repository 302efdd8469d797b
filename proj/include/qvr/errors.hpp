// Copyright 2026 The qvr Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qvr {

enum class ErrorKind {
    ZeroVector,
    DimensionMismatch,
    InvalidState,
    DegenerateDifference,
    DuplicateKey,
    EmptyClass,
    IncompleteVideo,
    BadMagic,
    TruncatedFile,
    PixelOutOfRange,
    TooSmall,
    Io,
    Config,
};

constexpr std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::ZeroVector: return "ZeroVector";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::InvalidState: return "InvalidState";
        case ErrorKind::DegenerateDifference: return "DegenerateDifference";
        case ErrorKind::DuplicateKey: return "DuplicateKey";
        case ErrorKind::EmptyClass: return "EmptyClass";
        case ErrorKind::IncompleteVideo: return "IncompleteVideo";
        case ErrorKind::BadMagic: return "BadMagic";
        case ErrorKind::TruncatedFile: return "TruncatedFile";
        case ErrorKind::PixelOutOfRange: return "PixelOutOfRange";
        case ErrorKind::TooSmall: return "TooSmall";
        case ErrorKind::Io: return "IoError";
        case ErrorKind::Config: return "ConfigError";
    }
    return "Unknown";
}

/// Base of every error raised by the library. `kind()` identifies the failure
/// so callers (and the CLI exit-code mapping) can branch without RTTI.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

    /// Configuration errors map to exit code 1; everything else is a data error.
    bool is_config_error() const noexcept { return kind_ == ErrorKind::Config; }

private:
    ErrorKind kind_;
};

template <ErrorKind K>
class KindError : public Error {
public:
    explicit KindError(const std::string& what) : Error(K, what) {}
};

using ZeroVectorError = KindError<ErrorKind::ZeroVector>;
using DimensionMismatchError = KindError<ErrorKind::DimensionMismatch>;
using InvalidStateError = KindError<ErrorKind::InvalidState>;
using DegenerateDifferenceError = KindError<ErrorKind::DegenerateDifference>;
using DuplicateKeyError = KindError<ErrorKind::DuplicateKey>;
using EmptyClassError = KindError<ErrorKind::EmptyClass>;
using IncompleteVideoError = KindError<ErrorKind::IncompleteVideo>;
using BadMagicError = KindError<ErrorKind::BadMagic>;
using TruncatedFileError = KindError<ErrorKind::TruncatedFile>;
using PixelOutOfRangeError = KindError<ErrorKind::PixelOutOfRange>;
using TooSmallError = KindError<ErrorKind::TooSmall>;
using IoError = KindError<ErrorKind::Io>;
using ConfigError = KindError<ErrorKind::Config>;

}  // namespace qvr
