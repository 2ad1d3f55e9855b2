#include "chartlint/lint_batch.hpp"

#include <cstddef>
#include <exception>
#include <mutex>

namespace chartlint {

namespace {

ViolationSet lint_item(const LintItem& item) {
    if (item.profiles) return lint(*item.spec, *item.table, *item.profiles);
    return lint(*item.spec, *item.table);
}

}  // namespace

std::vector<ViolationSet> lint_batch_serial(std::span<const LintItem> items) {
    std::vector<ViolationSet> out(items.size());
    for (std::size_t i = 0; i < items.size(); ++i) {
        out[i] = lint_item(items[i]);
    }
    return out;
}

std::vector<ViolationSet> lint_batch(std::span<const LintItem> items) {
#ifdef _OPENMP
    std::vector<ViolationSet> out(items.size());
    std::exception_ptr error;
    std::mutex error_mutex;
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(items.size()); ++i) {
        try {
            out[i] = lint_item(items[i]);
        } catch (...) {
            // exceptions must not escape the parallel region
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
    return out;
#else
    return lint_batch_serial(items);
#endif
}

}  // namespace chartlint
