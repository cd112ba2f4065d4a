// Copyright 2026 The Hostility Detection Authors.
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

#include "hostility/bundle_io.hpp"
#include "hostility/corpus.hpp"
#include "hostility/encoder.hpp"
#include "hostility/head.hpp"
#include "hostility/labels.hpp"
#include "hostility/losses.hpp"
#include "hostility/metrics.hpp"
#include "hostility/optimizer.hpp"
#include "hostility/predictions.hpp"
#include "hostility/strategies.hpp"
#include "hostility/synthetic.hpp"
#include "hostility/textprep.hpp"
#include "hostility/tiny_encoder.hpp"
