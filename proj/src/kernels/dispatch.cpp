#include <cstdlib>
#include <stdexcept>
#include <string>

#include "tgnn/kernels/kernels.hpp"

namespace tgnn::kernels {

#ifndef TGNN_HAVE_AVX2
const KernelTable* avx2_table() { return nullptr; }
#endif

bool cpu_supports(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(TGNN_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

namespace {

const KernelTable* table_for(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return &scalar_table();
    case Isa::avx2:
      return avx2_table();
  }
  return nullptr;
}

const KernelTable* initial_table() {
  if (const char* forced = std::getenv("TGNN_KERNELS")) {
    const std::string name(forced);
    if (name == "scalar") return &scalar_table();
    if (name == "avx2" && cpu_supports(Isa::avx2) && avx2_table() != nullptr) return avx2_table();
  }
  if (cpu_supports(Isa::avx2) && avx2_table() != nullptr) return avx2_table();
  return &scalar_table();
}

const KernelTable*& current() {
  static const KernelTable* table = initial_table();
  return table;
}

}  // namespace

const KernelTable& active() { return *current(); }

void select(Isa isa) {
  const KernelTable* table = table_for(isa);
  if (table == nullptr || !cpu_supports(isa)) {
    throw std::invalid_argument("kernel variant '" + std::string(to_string(isa)) +
                                "' is not available on this machine");
  }
  current() = table;
}

std::vector<const KernelTable*> available() {
  std::vector<const KernelTable*> out{&scalar_table()};
  if (cpu_supports(Isa::avx2) && avx2_table() != nullptr) out.push_back(avx2_table());
  return out;
}

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

}  // namespace tgnn::kernels
