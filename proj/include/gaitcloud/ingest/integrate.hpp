/*
 * Copyright 2026 The gaitcloud Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <vector>

#include "gaitcloud/core/types.hpp"

namespace gaitcloud::ingest {

// Appends curated segments to an Open session. Each foot's existing and new
// frames are merged by re-curating without a second baseline pass, so a
// replayed range collapses onto the frames already held.
//
// Throws SessionFinalized when the session is not Open, FootMismatch when a
// segment holds frames of the other foot.
Session integrate(const std::vector<CuratedSegment>& segments, Session session);

}  // namespace gaitcloud::ingest
