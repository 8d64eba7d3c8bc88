#pragma once

#include <exception>
#include <mutex>

namespace fwos {

// Exceptions must not cross an OpenMP region boundary. Work items run through
// run(); the first exception is kept and rethrown after the region joins.
class ErrorSlot {
 public:
  template <class F>
  void run(F&& f) noexcept {
    try {
      f();
    } catch (...) {
      std::lock_guard lock(mutex_);
      if (!error_) error_ = std::current_exception();
    }
  }

  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::mutex mutex_;
  std::exception_ptr error_;
};

int max_threads();

}  // namespace fwos
