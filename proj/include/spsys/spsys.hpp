// Copyright 2026 The spsys Authors
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

#include "spsys/classify.hpp"
#include "spsys/cpmaps.hpp"
#include "spsys/error.hpp"
#include "spsys/fock.hpp"
#include "spsys/linalg.hpp"
#include "spsys/ncpoly.hpp"
#include "spsys/reps.hpp"
#include "spsys/subproduct.hpp"

#define SPSYS_VERSION "0.3.0"
