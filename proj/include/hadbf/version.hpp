// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

namespace hadbf
{

// git-describe string captured at configure time
std::string library_version();

} // namespace hadbf
