// Copyright 2026 The govchain Authors
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

#ifndef GOVCHAIN_GOVCHAIN_HPP
#define GOVCHAIN_GOVCHAIN_HPP

// Umbrella header: the whole library in one include.

#include "govchain/annotations.hpp"
#include "govchain/builtin.hpp"
#include "govchain/canonical_json.hpp"
#include "govchain/cas.hpp"
#include "govchain/cas_net.hpp"
#include "govchain/chain.hpp"
#include "govchain/digest.hpp"
#include "govchain/errors.hpp"
#include "govchain/governance.hpp"
#include "govchain/inference.hpp"
#include "govchain/ontology.hpp"
#include "govchain/sha256.hpp"

#endif  // GOVCHAIN_GOVCHAIN_HPP
