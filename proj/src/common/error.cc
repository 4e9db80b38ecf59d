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

#include "nlv/common/error.h"

namespace nlv {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kInvalidRate: return "InvalidRate";
    case ErrorCode::kInputTooShort: return "InputTooShort";
    case ErrorCode::kEmptySequence: return "EmptySequence";
    case ErrorCode::kBadTarget: return "BadTarget";
    case ErrorCode::kNonScalarLoss: return "NonScalarLoss";
    case ErrorCode::kUnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::kCorruptHeader: return "CorruptHeader";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kEmptyAudio: return "EmptyAudio";
    case ErrorCode::kAudioTooShort: return "AudioTooShort";
    case ErrorCode::kBadMagic: return "BadMagic";
    case ErrorCode::kVersionUnsupported: return "VersionUnsupported";
    case ErrorCode::kTruncatedFile: return "TruncatedFile";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kDimMismatch: return "DimMismatch";
    case ErrorCode::kChecksumMismatch: return "ChecksumMismatch";
    case ErrorCode::kNonFinite: return "NonFinite";
    case ErrorCode::kConfigMismatch: return "ConfigMismatch";
    case ErrorCode::kZeroSupport: return "ZeroSupport";
    case ErrorCode::kTooFewPoints: return "TooFewPoints";
    case ErrorCode::kPerplexityTooHigh: return "PerplexityTooHigh";
    case ErrorCode::kHeaderMismatch: return "HeaderMismatch";
    case ErrorCode::kBadLabel: return "BadLabel";
    case ErrorCode::kDuplicateFile: return "DuplicateFile";
    case ErrorCode::kClassTooSmall: return "ClassTooSmall";
    case ErrorCode::kMissingFeature: return "MissingFeature";
    case ErrorCode::kTooFewFolds: return "TooFewFolds";
    case ErrorCode::kSchemaVersionMismatch: return "SchemaVersionMismatch";
    case ErrorCode::kEmptyVocabulary: return "EmptyVocabulary";
    case ErrorCode::kNotInVocabulary: return "NotInVocabulary";
    case ErrorCode::kDuplicateName: return "DuplicateName";
    case ErrorCode::kNotFound: return "NotFound";
    case ErrorCode::kInvalidPhone: return "InvalidPhone";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace nlv
