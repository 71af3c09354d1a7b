// Copyright 2026 The ouqnn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ouq/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace ouq::kernels {
namespace {

bool CpuHasAvx2Fma() {
#if defined(OUQ_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa InitialIsa() {
  if (const char* env = std::getenv("OUQ_ISA")) {
    if (std::string(env) == "scalar") return Isa::Scalar;
  }
  return detect_isa();
}

std::atomic<Isa>& ActiveSlot() {
  static std::atomic<Isa> slot{InitialIsa()};
  return slot;
}

void CheckSize(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(std::string("kernels: size mismatch in ") + what);
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  return isa == Isa::Scalar || (isa == Isa::Avx2 && CpuHasAvx2Fma());
}

Isa detect_isa() { return CpuHasAvx2Fma() ? Isa::Avx2 : Isa::Scalar; }

Isa active_isa() { return ActiveSlot().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (!isa_available(isa)) {
    throw std::invalid_argument("kernels: ISA " + std::string(isa_name(isa)) +
                                " not available on this CPU/build");
  }
  ActiveSlot().store(isa, std::memory_order_relaxed);
}

const KernelTable& table(Isa isa) {
#if defined(OUQ_HAVE_AVX2)
  if (isa == Isa::Avx2) return avx2::kTable;
#endif
  (void)isa;
  return scalar::kTable;
}

double dot(std::span<const double> a, std::span<const double> b) {
  CheckSize(a.size() == b.size(), "dot");
  return table(active_isa()).dot(a.data(), b.data(), a.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  CheckSize(x.size() == y.size(), "axpy");
  table(active_isa()).axpy(alpha, x.data(), y.data(), x.size());
}

void affine(std::span<const double> w, std::span<const double> bias,
            std::span<const double> x, std::span<double> out) {
  CheckSize(bias.size() == out.size() && w.size() == out.size() * x.size(),
            "affine");
  table(active_isa()).affine(w.data(), bias.data(), x.data(), out.data(),
                             out.size(), x.size());
}

void affine_transpose_acc(std::span<const double> w, std::span<const double> v,
                          std::span<double> out) {
  CheckSize(w.size() == v.size() * out.size(), "affine_transpose_acc");
  table(active_isa()).affine_transpose_acc(w.data(), v.data(), out.data(),
                                           v.size(), out.size());
}

void rank1_update(double alpha, std::span<const double> u,
                  std::span<const double> x, std::span<double> w) {
  CheckSize(w.size() == u.size() * x.size(), "rank1_update");
  table(active_isa()).rank1_update(alpha, u.data(), x.data(), w.data(),
                                   u.size(), x.size());
}

}  // namespace ouq::kernels
