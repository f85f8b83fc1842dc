/*
 * Copyright 2026 The vdattack Authors
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
 */

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "vdattack/attack.hpp"
#include "vdattack/transport.hpp"

namespace vdattack::results_io {

transport::Json to_json(const attack::AttackResult& result);
attack::AttackResult result_from_json(const transport::Json& json);

/// One compact JSON object per line, in the given order.
std::string to_jsonl(const std::vector<attack::AttackResult>& results);
std::vector<attack::AttackResult> parse_jsonl(std::string_view text);
std::vector<attack::AttackResult> load_jsonl(const std::filesystem::path& path);

}  // namespace vdattack::results_io
