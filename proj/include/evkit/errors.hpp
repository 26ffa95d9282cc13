// Copyright 2026 the evkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace evkit {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A constructor or operation received a value outside its documented domain.
struct InvalidArgument : Error {
    using Error::Error;
};

// Token/matrix dimensions do not line up.
struct ShapeError : Error {
    using Error::Error;
};

// A flat embedding table whose row count is not a perfect square.
struct NotSquare : ShapeError {
    using ShapeError::ShapeError;
};

// Embedding width incompatible with the sin/cos channel layout.
struct BadDim : ShapeError {
    using ShapeError::ShapeError;
};

// Token stream does not follow the slice markup grammar.
struct MalformedSchema : Error {
    using Error::Error;
};

// NaN or infinity in a tensor that must be finite.
struct NonFiniteWeight : Error {
    using Error::Error;
};

// DPO temperature must be positive.
struct BadBeta : InvalidArgument {
    using InvalidArgument::InvalidArgument;
};

// Deployment configuration violates a device limit.
struct BadConfig : InvalidArgument {
    using InvalidArgument::InvalidArgument;
};

// Configuration search over an empty candidate set.
struct EmptySpace : InvalidArgument {
    using InvalidArgument::InvalidArgument;
};

// Could not open, read or write a file.
struct IoError : Error {
    using Error::Error;
};

// File opened fine but its contents are not a valid evkit artifact.
struct FormatError : Error {
    using Error::Error;
};

} // namespace evkit
