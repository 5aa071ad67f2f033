/*
 * Copyright 2026 The tenantsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <string>

#include "tenantsim/trace.hpp"

namespace tenantsim {

/// Static SVG of a schedule: time runs left to right, PE columns top to
/// bottom, one labelled block per executed layer. Throws EmptyTrace if the
/// trace holds no layers.
std::string render_gantt(const Trace& trace);

}  // namespace tenantsim
