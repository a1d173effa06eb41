#pragma once

#include <span>

#include "qrlab/grid.hpp"

// Raw lattice transforms: unnormalized, unshifted, in place. Plans are cached
// per (rank, length, direction) and the cache is safe under concurrent lookup.
namespace qrlab::fft {

/// data_k <- sum_j data_j e^{-2 pi i j.k / n}
void forward(const GridSpec& spec, std::span<cplx> data);
/// data_j <- sum_k data_k e^{+2 pi i j.k / n}
void inverse(const GridSpec& spec, std::span<cplx> data);

void forward_1d(std::span<cplx> data);
void inverse_1d(std::span<cplx> data);

}  // namespace qrlab::fft
