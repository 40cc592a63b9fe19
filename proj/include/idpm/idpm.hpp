//
// Copyright 2026 The idpm Authors
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
//

// Umbrella header.

#ifndef IDPM_IDPM_HPP_
#define IDPM_IDPM_HPP_

#include "idpm/budget.hpp"
#include "idpm/csv.hpp"
#include "idpm/dataset.hpp"
#include "idpm/error.hpp"
#include "idpm/evaluation.hpp"
#include "idpm/experiment.hpp"
#include "idpm/laplace.hpp"
#include "idpm/manifest.hpp"
#include "idpm/mechanisms.hpp"
#include "idpm/microaggregation.hpp"
#include "idpm/oracle.hpp"
#include "idpm/parallel.hpp"
#include "idpm/sensitivity.hpp"
#include "idpm/version.hpp"

#endif  // IDPM_IDPM_HPP_
