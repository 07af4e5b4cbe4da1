#pragma once

#include <complex>
#include <vector>

namespace pumpshape::detail {

// In-place 2-D complex DFT, n x n row-major. sign -1 is the forward transform
// (exp(-i...)), +1 the unnormalized inverse. Plans are cached per size with
// FFTW_ESTIMATE so results are run-to-run deterministic; concurrent calls on
// distinct buffers are safe.
void dft2d(std::vector<std::complex<double>>& data, int n, int sign);

}  // namespace pumpshape::detail
