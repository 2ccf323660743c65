// Copyright 2026 The Helmlab Authors. All Rights Reserved.
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

#include "helmlab/baselines.hpp"
#include "helmlab/dataset.hpp"
#include "helmlab/design.hpp"
#include "helmlab/errors.hpp"
#include "helmlab/eval.hpp"
#include "helmlab/export.hpp"
#include "helmlab/fit.hpp"
#include "helmlab/lbfgsb.hpp"
#include "helmlab/metric.hpp"
#include "helmlab/params.hpp"
#include "helmlab/pchip.hpp"
#include "helmlab/transform.hpp"
#include "helmlab/types.hpp"
