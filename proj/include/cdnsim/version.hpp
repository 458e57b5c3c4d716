// Copyright 2026 cdnsim contributors
// Licensed under the terms of the Apache 2.0 open source license
// See LICENSE file for terms.

#pragma once

namespace cdnsim {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace cdnsim
