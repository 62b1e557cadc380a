#pragma once

#include "pka/simd/kernels.hpp"

namespace pka::simd::detail {

const KernelTable& scalar_table();

// nullptr when the variant was not compiled for this target.
const KernelTable* avx2_table();
const KernelTable* neon_table();

}  // namespace pka::simd::detail
