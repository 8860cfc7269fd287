#include "fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace fraclat::detail {

namespace {

// FFTW's planner is not re-entrant; execution of distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class Plan {
 public:
  Plan(std::vector<std::complex<double>>& data, std::span<const int> dims, int sign) {
    auto* p = reinterpret_cast<fftw_complex*>(data.data());
    std::lock_guard lock(planner_mutex());
    plan_ = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), p, p,
                          sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
    if (plan_ == nullptr) throw std::runtime_error("FFTW failed to create a plan");
  }
  ~Plan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;

  void execute() const { fftw_execute(plan_); }

 private:
  fftw_plan plan_;
};

}  // namespace

void fft_inplace(std::vector<std::complex<double>>& data, std::span<const int> dims, int sign) {
  std::size_t n = 1;
  for (int d : dims) n *= static_cast<std::size_t>(d);
  if (n != data.size()) throw std::invalid_argument("fft: data size does not match dims");
  Plan plan(data, dims, sign);
  plan.execute();
}

}  // namespace fraclat::detail
