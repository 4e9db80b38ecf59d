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

#include <cstdio>
#include <sstream>
#include <string>

#include "nlv/attribution/attribution.h"
#include "nlv/common/error.h"

namespace nlv::attribution {

namespace {

std::string Fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

// Shortest text that parses back to the same double.
std::string Exact(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

std::string AudacityLabels(std::span<const AcousticUnit> units, double frame_period_ms,
                           const std::string& label_prefix) {
  std::string out;
  for (size_t i = 0; i < units.size(); ++i) {
    const double start = static_cast<double>(units[i].start_frame) * frame_period_ms / 1000.0;
    const double end = start + units[i].duration_ms / 1000.0;
    out += Fixed6(start) + "\t" + Fixed6(end) + "\t" + label_prefix + "_" +
           std::to_string(i) + "\n";
  }
  return out;
}

std::string UnitsCsv(std::span<const UnitRecord> units, size_t dims) {
  std::string out = "clip_id,start_frame,end_frame,duration_ms";
  for (size_t d = 0; d < dims; ++d) out += ",dim_" + std::to_string(d);
  out += "\n";
  for (const auto& r : units) {
    if (r.unit.embedding.size() != dims) {
      throw Error(ErrorCode::kShapeMismatch, "unit embedding width != CSV dims");
    }
    if (r.clip_id.find_first_of(",\n") != std::string::npos) {
      throw Error(ErrorCode::kInvalidArgument, "clip id may not contain ',' or newline");
    }
    out += r.clip_id + "," + std::to_string(r.unit.start_frame) + "," +
           std::to_string(r.unit.end_frame) + "," + Exact(r.unit.duration_ms);
    for (double v : r.unit.embedding) out += "," + Exact(v);
    out += "\n";
  }
  return out;
}

std::vector<UnitRecord> ParseUnitsCsv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::kHeaderMismatch, "empty unit CSV");
  const auto header = SplitCsv(line);
  if (header.size() < 4 || header[0] != "clip_id" || header[1] != "start_frame" ||
      header[2] != "end_frame" || header[3] != "duration_ms") {
    throw Error(ErrorCode::kHeaderMismatch, "unexpected unit CSV header");
  }
  const size_t dims = header.size() - 4;
  for (size_t d = 0; d < dims; ++d) {
    if (header[4 + d] != "dim_" + std::to_string(d)) {
      throw Error(ErrorCode::kHeaderMismatch, "unexpected column " + header[4 + d]);
    }
  }
  std::vector<UnitRecord> records;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = SplitCsv(line);
    if (f.size() != header.size()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "unit CSV line " + std::to_string(line_no) + " has wrong field count");
    }
    try {
      UnitRecord r;
      r.clip_id = f[0];
      r.unit.start_frame = std::stoul(f[1]);
      r.unit.end_frame = std::stoul(f[2]);
      r.unit.frame_count = r.unit.end_frame - r.unit.start_frame + 1;
      r.unit.duration_ms = std::stod(f[3]);
      for (size_t d = 0; d < dims; ++d) r.unit.embedding.push_back(std::stod(f[4 + d]));
      records.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::kInvalidArgument,
                  "unit CSV line " + std::to_string(line_no) + " is not numeric");
    }
  }
  return records;
}

}  // namespace nlv::attribution
