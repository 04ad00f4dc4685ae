// Copyright 2026 The locc-spectrum Authors
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

#include "locc/common.hpp"
#include "locc/json_io.hpp"
#include "locc/locc.hpp"
#include "locc/majorization.hpp"
#include "locc/parallel.hpp"
#include "locc/random.hpp"
#include "locc/rate.hpp"
#include "locc/spectral.hpp"
#include "locc/state.hpp"
#include "locc/type_classes.hpp"
#include "locc/verify.hpp"
#include "locc/weights.hpp"
