// Copyright 2026 The ouqnn Authors
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

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace ouq::csv {

// %.17g: 17 significant digits, enough to round-trip every double.
std::string format(double value);

std::vector<std::string> split(const std::string& line, char sep = ',');

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

// Numeric CSV with one header line. Throws CorruptFile on ragged rows or
// unparsable cells.
Table read_numeric(std::istream& in, const std::string& source = "<stream>");
Table read_numeric_file(const std::filesystem::path& path);

void write_row(std::ostream& out, const std::vector<std::string>& cells);

}  // namespace ouq::csv
