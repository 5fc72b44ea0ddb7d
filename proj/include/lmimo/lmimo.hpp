// SPDX-License-Identifier: Apache-2.0
//
// lmimo - multi-cell Massive MIMO in line-of-sight: SINR closed forms and power control
// Copyright (C) 2026 The lmimo Authors
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

#ifndef LMIMO_LMIMO_HPP
#define LMIMO_LMIMO_HPP

#include "channel.hpp"
#include "common.hpp"
#include "geometry.hpp"
#include "linproc.hpp"
#include "matrix_io.hpp"
#include "mcsim.hpp"
#include "numeric.hpp"
#include "powerctl.hpp"
#include "rng.hpp"
#include "scenario.hpp"

#endif
