// aud/aud-common.h

// Copyright 2026  The audkit Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef AUD_AUD_COMMON_H_
#define AUD_AUD_COMMON_H_

#include <cstdint>
#include <exception>
#include <string>
#include <utility>

#include <Eigen/Core>

namespace aud {

/// Dense row-major matrix; one row per frame or per sample.
template <typename Scalar>
using RowMatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using RowMatrixXf = RowMatrixX<float>;
using RowMatrixXd = RowMatrixX<double>;

using FrameIndex = std::int64_t;

/// Error categories.  The CLI maps each category onto an exit code, so every
/// exception thrown by the library derives from Error and carries one.
enum class ErrorCategory {
  kConfig,     // bad configuration or arguments
  kData,       // malformed or inconsistent input data
  kInvariant,  // internal invariant failed
};

class Error : public std::exception {
 public:
  Error(ErrorCategory category, std::string what)
      : category_(category), what_(std::move(what)) {}
  ErrorCategory category() const { return category_; }
  const char *what() const noexcept override { return what_.c_str(); }

  /// Prefixes the message with the pipeline stage that raised it, keeping
  /// the dynamic type for a subsequent `throw;`.
  void add_context(const std::string &stage) { what_ = stage + ": " + what_; }

 private:
  ErrorCategory category_;
  std::string what_;
};

#define AUD_DEFINE_ERROR(Name, Category)                        \
  class Name : public Error {                                   \
   public:                                                      \
    explicit Name(const std::string &what)                      \
        : Error(ErrorCategory::Category, #Name ": " + what) {}  \
  };

AUD_DEFINE_ERROR(FormatError, kData)
AUD_DEFINE_ERROR(DimensionError, kData)
AUD_DEFINE_ERROR(DataError, kData)
AUD_DEFINE_ERROR(IoError, kData)
AUD_DEFINE_ERROR(ContiguityError, kData)
AUD_DEFINE_ERROR(CoverageError, kData)
AUD_DEFINE_ERROR(EmptySegmentError, kData)
AUD_DEFINE_ERROR(InsufficientSamplesError, kData)
AUD_DEFINE_ERROR(KeyError, kData)
AUD_DEFINE_ERROR(EmptyInputError, kData)
AUD_DEFINE_ERROR(DuplicateKeyError, kConfig)
AUD_DEFINE_ERROR(ConfigError, kConfig)
AUD_DEFINE_ERROR(InvariantError, kInvariant)

#undef AUD_DEFINE_ERROR

#define AUD_CHECK(cond)                                                   \
  do {                                                                    \
    if (!(cond))                                                          \
      throw ::aud::InvariantError(std::string(__FILE__) + ":" +           \
                                  std::to_string(__LINE__) + ": " #cond); \
  } while (0)

}  // namespace aud

#endif  // AUD_AUD_COMMON_H_
