// Copyright 2026 The qbench Authors
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

#include "qbench/circuits.hpp"
#include "qbench/config.hpp"
#include "qbench/csv.hpp"
#include "qbench/metrics.hpp"
#include "qbench/noise.hpp"
#include "qbench/qcore.hpp"
#include "qbench/rng.hpp"
#include "qbench/stats.hpp"
#include "qbench/svg.hpp"
#include "qbench/sweep.hpp"
#include "qbench/validate.hpp"
