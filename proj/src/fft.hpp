#pragma once

#include <complex>

namespace nct::fft {

// In-place-capable complex DFT of length n, unnormalized, FFTW sign conventions.
void forward(int n, const std::complex<double>* in, std::complex<double>* out);
void backward(int n, const std::complex<double>* in, std::complex<double>* out);

}  // namespace nct::fft
