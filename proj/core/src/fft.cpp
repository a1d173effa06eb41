#include "qrlab/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include "qrlab/errors.hpp"

namespace qrlab::fft {
namespace {

using Key = std::tuple<int, int, int>;

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(int rank, int n, int sign) {
    std::lock_guard lock(mutex_);
    const Key key{rank, n, sign};
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::size_t total = 1;
    for (int r = 0; r < rank; ++r) total *= static_cast<std::size_t>(n);
    std::vector<cplx> scratch(total);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    const int dims[3] = {n, n, n};
    fftw_plan plan = fftw_plan_dft(rank, dims, buf, buf, sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan == nullptr) throw ParameterError("fftw: unable to create plan");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<Key, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

void run(int rank, int n, int sign, std::span<cplx> data) {
  fftw_plan plan = cache().get(rank, n, sign);
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, buf, buf);
}

int checked_length(std::size_t size) {
  if (size == 0 || (size & (size - 1)) != 0)
    throw ParameterError("fft: length must be a power of two");
  return static_cast<int>(size);
}

}  // namespace

void forward(const GridSpec& spec, std::span<cplx> data) {
  if (data.size() != spec.size()) throw ParameterError("fft: size mismatch");
  run(spec.dim, spec.n, FFTW_FORWARD, data);
}

void inverse(const GridSpec& spec, std::span<cplx> data) {
  if (data.size() != spec.size()) throw ParameterError("fft: size mismatch");
  run(spec.dim, spec.n, FFTW_BACKWARD, data);
}

void forward_1d(std::span<cplx> data) {
  run(1, checked_length(data.size()), FFTW_FORWARD, data);
}

void inverse_1d(std::span<cplx> data) {
  run(1, checked_length(data.size()), FFTW_BACKWARD, data);
}

}  // namespace qrlab::fft
