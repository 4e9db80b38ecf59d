// Copyright 2026 The nlvoice Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NLV_COMMON_ERROR_H_
#define NLV_COMMON_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace nlv {

// Every failure surfaced by the library carries one of these codes. The CLI
// maps them onto exit codes and the HTTP service onto status codes.
enum class ErrorCode {
  kShapeMismatch,
  kInvalidRate,
  kInputTooShort,
  kEmptySequence,
  kBadTarget,
  kNonScalarLoss,
  kUnsupportedFormat,
  kCorruptHeader,
  kIoError,
  kEmptyAudio,
  kAudioTooShort,
  kBadMagic,
  kVersionUnsupported,
  kTruncatedFile,
  kInvalidConfig,
  kDimMismatch,
  kChecksumMismatch,
  kNonFinite,
  kConfigMismatch,
  kZeroSupport,
  kTooFewPoints,
  kPerplexityTooHigh,
  kHeaderMismatch,
  kBadLabel,
  kDuplicateFile,
  kClassTooSmall,
  kMissingFeature,
  kTooFewFolds,
  kSchemaVersionMismatch,
  kEmptyVocabulary,
  kNotInVocabulary,
  kDuplicateName,
  kNotFound,
  kInvalidPhone,
  kInvalidArgument,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace nlv

#endif  // NLV_COMMON_ERROR_H_
