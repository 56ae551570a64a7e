/* Copyright (C) 2026 The gqf-dmt Authors.
 * This program is Licensed under the Apache License, Version 2.0
 * (the "License"); you may not use this file except in compliance
 * with the License. You may obtain a copy of the License at
 *   http://www.apache.org/licenses/LICENSE-2.0
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License. See accompanying LICENSE file.
 */
#pragma once

#include "gqf/channel.hpp"
#include "gqf/curves.hpp"
#include "gqf/exponent.hpp"
#include "gqf/lp.hpp"
#include "gqf/outage.hpp"
#include "gqf/rates.hpp"
#include "gqf/report.hpp"

namespace gqf {
inline constexpr const char* kVersion = "1.0.0";
}
