// Copyright 2026 The Dragoon-Sim Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "dragoon/sim/compare.hpp"
#include "dragoon/sim/fuzz.hpp"
#include "dragoon/sim/ideal_hit.hpp"
#include "dragoon/sim/network.hpp"
#include "dragoon/sim/parties.hpp"
#include "dragoon/sim/scenario.hpp"
#include "dragoon/sim/scheduler.hpp"
#include "dragoon/sim/world.hpp"
