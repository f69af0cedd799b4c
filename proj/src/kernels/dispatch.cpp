#include <atomic>
#include <stdexcept>
#include <string>

#include "rwlap/kernels.hpp"

namespace rwlap::kernels {

#if RWLAP_HAVE_AVX2
const Table* avx2_table_impl();
#endif

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "unknown";
}

const Table* avx2_table() {
#if RWLAP_HAVE_AVX2
  return avx2_table_impl();
#else
  return nullptr;
#endif
}

bool cpu_supports(Isa isa) {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2:
#if RWLAP_HAVE_AVX2 && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

Isa detect() { return (avx2_table() != nullptr && cpu_supports(Isa::avx2)) ? Isa::avx2 : Isa::scalar; }

namespace {

const Table* table_for(Isa isa) { return isa == Isa::avx2 ? avx2_table() : &scalar_table(); }

std::atomic<const Table*>& active_slot() {
  static std::atomic<const Table*> slot{table_for(detect())};
  return slot;
}

}  // namespace

const Table& active() { return *active_slot().load(std::memory_order_acquire); }

void select(Isa isa) {
  const Table* t = table_for(isa);
  if (t == nullptr || !cpu_supports(isa)) {
    throw std::invalid_argument("kernel variant '" + std::string(to_string(isa)) +
                                "' is not available on this machine");
  }
  active_slot().store(t, std::memory_order_release);
}

ScopedIsa::ScopedIsa(Isa isa) : previous_(active().isa) { select(isa); }
ScopedIsa::~ScopedIsa() { select(previous_); }

}  // namespace rwlap::kernels
