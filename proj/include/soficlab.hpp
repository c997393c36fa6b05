// Copyright 2026 The soficlab Authors
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

#pragma once

#include "soficlab/almost_action.hpp"
#include "soficlab/amenability.hpp"
#include "soficlab/coarse.hpp"
#include "soficlab/errors.hpp"
#include "soficlab/family.hpp"
#include "soficlab/generators.hpp"
#include "soficlab/graph.hpp"
#include "soficlab/group.hpp"
#include "soficlab/io.hpp"
#include "soficlab/local_stats.hpp"
#include "soficlab/permutation.hpp"
#include "soficlab/random.hpp"
#include "soficlab/rational.hpp"
#include "soficlab/spectral.hpp"
