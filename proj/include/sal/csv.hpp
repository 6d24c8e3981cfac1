/*
 * Copyright 2026 The sal Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 */

#pragma once

#include <string>
#include <vector>

namespace sal {

/// Shortest decimal string that parses back to exactly `v`.
std::string format_shortest(double v);

/// Strict decimal parse of the whole string; throws ValidationError naming `where`.
double parse_real(const std::string& s, const std::string& where);

/// Splits one comma-separated line; cells are trimmed of blanks and CR.
std::vector<std::string> split_csv_line(const std::string& line);

} // namespace sal
