// Copyright 2026 the decokin authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace decokin::csv {

// Comma-separated, UTF-8, LF line endings, one header row with column names
// (units in brackets where meaningful). Floats are written in the shortest
// decimal form that round-trips, so re-parsing an emitted file reproduces the
// in-memory values exactly and identical runs produce byte-identical files.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

std::string format_double(double v);

std::string to_string(const Table& table);
void write_file(const std::filesystem::path& path, const Table& table);

// Strict reader for the same dialect; throws ValidationError with the line
// number on malformed input.
Table read_file(const std::filesystem::path& path);
Table parse(const std::string& text, const std::string& source_name = "<string>");

}  // namespace decokin::csv
