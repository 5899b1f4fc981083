// Copyright 2026 The kgwalk Authors.
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

#ifndef KGWALK_COMMON_TEXT_H_
#define KGWALK_COMMON_TEXT_H_

#include <string>
#include <string_view>
#include <vector>

namespace kgwalk {

// ASCII-only lowercasing; bytes >= 0x80 pass through untouched so UTF-8
// sequences stay intact.
std::string AsciiLower(std::string_view s);

std::string_view Trim(std::string_view s);

std::vector<std::string_view> Split(std::string_view s, char sep);

bool IsAsciiAlnum(char c);

// Reads a whole file into memory. Throws Error(kIo) on failure.
std::string ReadFile(const std::string& path);

// Writes via a temporary sibling and rename, so readers never see a partial
// file.
void WriteFileAtomic(const std::string& path, std::string_view contents);

}  // namespace kgwalk

#endif  // KGWALK_COMMON_TEXT_H_
