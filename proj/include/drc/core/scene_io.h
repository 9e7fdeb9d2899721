// Copyright 2026 The drc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>

#include "drc/core/scene.h"

namespace drc {

// Parses a scene document (see docs/scene-format.md). Syntax errors throw
// ParseError carrying the byte offset; semantic errors throw ValidationError.
SceneDescription parse_scene_description(std::string_view text);
Scene parse_scene(std::string_view text);
Scene load_scene(const std::string &path);

// Canonical document for `desc`; parse_scene_description inverts it exactly.
std::string serialize_scene(const SceneDescription &desc);

}  // namespace drc
