// dris c++ library for double-RIS MIMO channel simulation and optimization
// Copyright (C) 2026 The dris authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include "dris/arrays.hpp"
#include "dris/channel.hpp"
#include "dris/common.hpp"
#include "dris/config.hpp"
#include "dris/correlation.hpp"
#include "dris/experiments.hpp"
#include "dris/geometry.hpp"
#include "dris/optimizer.hpp"
#include "dris/parallel.hpp"
#include "dris/rng.hpp"
#include "dris/ser.hpp"
#include "dris/statistics.hpp"
