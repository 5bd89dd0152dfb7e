// Copyright 2026 The qdl Authors
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

#include "qdl/amplitude.hpp"
#include "qdl/error.hpp"
#include "qdl/evaluation.hpp"
#include "qdl/iris.hpp"
#include "qdl/loss.hpp"
#include "qdl/measurement.hpp"
#include "qdl/network.hpp"
#include "qdl/nonlinear.hpp"
#include "qdl/rotation_mesh.hpp"
#include "qdl/trainer.hpp"
