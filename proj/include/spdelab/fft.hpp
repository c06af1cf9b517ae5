#pragma once

#include <complex>
#include <vector>

namespace spdelab {

// Thin FFTW wrapper for 1-d and 2-d complex transforms on the periodic grid.
// Plans are cached per (size, dim, direction) behind a mutex; executing a
// cached plan on caller-owned buffers is thread safe (new-array execute with
// FFTW_UNALIGNED plans), which the multi-threaded ensemble driver relies on.

using Complex = std::complex<double>;

//! In-place forward DFT, unnormalised (sum convention): out_k = sum_j in_j e^{-2pi i kj/n}.
//! dim is 1 or 2; for dim==2 the buffer holds an n-by-n row-major square.
void dft_forward(std::vector<Complex>& data, int n, int dim);

//! In-place inverse DFT, unnormalised: out_j = sum_k in_k e^{+2pi i kj/n}.
void dft_inverse(std::vector<Complex>& data, int n, int dim);

//! Forward DFT normalised to Fourier coefficients (divides by n^dim), i.e.
//! f_j = sum_k coeff_k e^{+2pi i kj/n} reconstructs the input exactly.
void dft_coefficients(std::vector<Complex>& data, int n, int dim);

}  // namespace spdelab
