#include "lqed/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace lqed::fft {

namespace {

std::mutex plan_mutex;

fftw_plan get_plan(int rank, int n, int sign) {
  static std::map<std::tuple<int, int, int>, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(plan_mutex);
  auto key = std::make_tuple(rank, n, sign);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  // a throwaway buffer defines the plan; FFTW_UNALIGNED lets the plan run on
  // any caller array of the same shape
  const std::size_t total = rank == 1 ? n : std::size_t(n) * n;
  fftw_complex* buf = fftw_alloc_complex(total);
  if (!buf) throw std::bad_alloc();
  fftw_plan p = rank == 1
                    ? fftw_plan_dft_1d(n, buf, buf, sign,
                                       FFTW_ESTIMATE | FFTW_UNALIGNED)
                    : fftw_plan_dft_2d(n, n, buf, buf, sign,
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(buf);
  if (!p) throw std::runtime_error("FFT planning failed");
  cache.emplace(key, p);
  return p;
}

void run(Eigen::VectorXcd& data, int rank, int n, int sign) {
  const std::size_t total = rank == 1 ? n : std::size_t(n) * n;
  if (static_cast<std::size_t>(data.size()) != total)
    throw std::invalid_argument("grid size does not match transform shape");
  fftw_plan p = get_plan(rank, n, sign);
  auto* raw = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(p, raw, raw);
  data *= 1.0 / std::sqrt(static_cast<double>(total));
}

}  // namespace

void forward_1d(Eigen::VectorXcd& data) {
  run(data, 1, static_cast<int>(data.size()), FFTW_FORWARD);
}

void inverse_1d(Eigen::VectorXcd& data) {
  run(data, 1, static_cast<int>(data.size()), FFTW_BACKWARD);
}

void forward_2d(Eigen::VectorXcd& data, int n) {
  run(data, 2, n, FFTW_FORWARD);
}

void inverse_2d(Eigen::VectorXcd& data, int n) {
  run(data, 2, n, FFTW_BACKWARD);
}

}  // namespace lqed::fft
