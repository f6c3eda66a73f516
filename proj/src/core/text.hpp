// Copyright 2026 The tblcheck Authors.
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

// Small string helpers shared by the file readers and writers.

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace tblcheck::text {

std::vector<std::string> Split(std::string_view s, char sep);
std::string_view Trim(std::string_view s);
std::string AsciiLower(std::string_view s);

// Splits UTF-8 text into code points, each kept as its byte sequence.
// Invalid lead bytes are passed through as single bytes.
std::vector<std::string> Utf8Chars(std::string_view s);

// Reads a whole file; throws IoError if it cannot be opened.
std::string ReadFile(const std::string& path);
// Writes a whole file; throws IoError on failure.
void WriteFile(const std::string& path, std::string_view contents);

// Splits file contents into lines, dropping a trailing '\r' on each.
std::vector<std::string> Lines(std::string_view contents);

// Parses a signed integer, throwing ParseError mentioning `what` on failure.
long long ParseInt(std::string_view s, const std::string& what);

}  // namespace tblcheck::text
