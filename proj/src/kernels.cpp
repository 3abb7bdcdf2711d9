#include "qport/kernels.hpp"

#include <atomic>
#include <string>

#include "qport/errors.hpp"

namespace qport::kernels {

#ifndef QPORT_HAVE_AVX2
const KernelTable* avx2_table() { return nullptr; }
#endif

bool avx2_available() {
#ifdef QPORT_HAVE_AVX2
    return __builtin_cpu_supports("avx2") != 0;
#else
    return false;
#endif
}

namespace {

const KernelTable* resolve(Backend request) {
    switch (request) {
    case Backend::Scalar:
        return &scalar_table();
    case Backend::Avx2:
        if (!avx2_available())
            raise(ErrorCode::UnsupportedKernel, "avx2 not available on this cpu");
        return avx2_table();
    case Backend::Auto:
        return avx2_available() ? avx2_table() : &scalar_table();
    }
    raise(ErrorCode::UnsupportedKernel, "unknown backend");
}

std::atomic<const KernelTable*>& active_slot() {
    static std::atomic<const KernelTable*> slot{resolve(Backend::Auto)};
    return slot;
}

} // namespace

const KernelTable& active() { return *active_slot().load(std::memory_order_acquire); }

Backend current() {
    return &active() == &scalar_table() ? Backend::Scalar : Backend::Avx2;
}

Backend select(Backend request) {
    active_slot().store(resolve(request), std::memory_order_release);
    return current();
}

Backend backend_from_name(std::string_view name) {
    if (name == "auto")
        return Backend::Auto;
    if (name == "scalar")
        return Backend::Scalar;
    if (name == "avx2")
        return Backend::Avx2;
    raise(ErrorCode::UnsupportedKernel, "unknown kernel '" + std::string(name) + "'");
}

std::string_view backend_name(Backend backend) {
    switch (backend) {
    case Backend::Auto:
        return "auto";
    case Backend::Scalar:
        return "scalar";
    case Backend::Avx2:
        return "avx2";
    }
    return "?";
}

} // namespace qport::kernels
