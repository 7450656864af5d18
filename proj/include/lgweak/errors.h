// Copyright 2026 The lgweak Authors
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

#ifndef LGWEAK_ERRORS_H
#define LGWEAK_ERRORS_H

#include <stdexcept>
#include <string>

namespace lgweak {

/// Base class for the numerical guards raised by the library. The CLI maps
/// these to exit code 3; malformed input raises std::invalid_argument instead.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Pre/post-selection pair is (nearly) orthogonal.
class PostSelectionSingular : public Error {
   public:
    using Error::Error;
};

class ChainTooShort : public Error {
   public:
    using Error::Error;
};

class EnumerationTooLarge : public Error {
   public:
    using Error::Error;
};

class LengthMismatch : public Error {
   public:
    using Error::Error;
};

/// More probability mass falls outside the detector than the guard allows.
class GridTooSmall : public Error {
   public:
    using Error::Error;
};

class InsufficientCounts : public Error {
   public:
    using Error::Error;
};

/// A pointer coupling of zero makes the weak-average inversion undefined.
class ZeroCoupling : public Error {
   public:
    using Error::Error;
};

}  // namespace lgweak

#endif
