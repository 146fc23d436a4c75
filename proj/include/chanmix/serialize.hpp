// Copyright 2026 The chanmix Authors
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

// JSON forms of matrices, channels, circuits and results.
//
// A matrix is a list of rows of [re, im] pairs. A channel is
// {"label", "dim", "kraus": [matrix, ...], "weights"?: [...]}; a circuit is
// {"layout": {...}, "items": [{"kind", "name", "matrix"?, "kraus"?,
// "targets", "controls", "control_value"}, ...]}.

#include <json.hpp>

#include "chanmix/circuit.hpp"
#include "chanmix/compile.hpp"
#include "chanmix/kraus.hpp"
#include "chanmix/pec.hpp"

namespace chanmix {

using json = nlohmann::json;

json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j);

json channel_to_json(const KrausChannel& channel);
KrausChannel channel_from_json(const json& j);

json circuit_to_json(const Circuit& circuit);
Circuit circuit_from_json(const json& j);

json resources_to_json(const ResourceCount& rc);
json quasiprob_to_json(const QuasiProbRep& rep);

}  // namespace chanmix
