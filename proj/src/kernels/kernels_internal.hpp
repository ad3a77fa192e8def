#pragma once

#include "rcsteer/kernels.hpp"

namespace rcsteer::kernels::detail {

// Defined in the ISA-specific translation units. Return nullptr when the
// variant is not built for this target.
const KernelTable* avx2_table();
const KernelTable* neon_table();

}  // namespace rcsteer::kernels::detail
