#pragma once

#include <condition_variable>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace mbadmm::detail {

/// Fixed pool that runs one task per index and returns once all are done.
/// Index i always goes to worker i % size(), so results never depend on
/// scheduling. Not reentrant.
class WorkerPool {
public:
    explicit WorkerPool(int workers) {
        const int extra = workers > 1 ? workers - 1 : 0;
        threads_.reserve(extra);
        for (int w = 1; w <= extra; ++w) threads_.emplace_back([this, w] { loop(w); });
    }

    ~WorkerPool() {
        {
            std::lock_guard lock(mutex_);
            stop_ = true;
        }
        start_cv_.notify_all();
        for (auto& t : threads_) t.join();
    }

    WorkerPool(const WorkerPool&) = delete;
    WorkerPool& operator=(const WorkerPool&) = delete;

    std::size_t size() const { return threads_.size() + 1; }

    void run(std::size_t count, const std::function<void(std::size_t)>& task) {
        if (threads_.empty() || count <= 1) {
            for (std::size_t i = 0; i < count; ++i) task(i);
            return;
        }
        errors_.assign(count, nullptr);
        {
            std::lock_guard lock(mutex_);
            task_ = &task;
            count_ = count;
            pending_ = threads_.size();
            ++generation_;
        }
        start_cv_.notify_all();
        work(0);
        {
            std::unique_lock lock(mutex_);
            done_cv_.wait(lock, [this] { return pending_ == 0; });
            task_ = nullptr;
        }
        // lowest failing index wins, independent of timing
        for (auto& e : errors_)
            if (e) std::rethrow_exception(e);
    }

private:
    void work(std::size_t worker) {
        for (std::size_t i = worker; i < count_; i += size()) {
            try {
                (*task_)(i);
            } catch (...) {
                errors_[i] = std::current_exception();
            }
        }
    }

    void loop(std::size_t worker) {
        std::size_t seen = 0;
        for (;;) {
            {
                std::unique_lock lock(mutex_);
                start_cv_.wait(lock, [&] { return stop_ || generation_ != seen; });
                if (stop_) return;
                seen = generation_;
            }
            work(worker);
            {
                std::lock_guard lock(mutex_);
                --pending_;
            }
            done_cv_.notify_one();
        }
    }

    std::vector<std::thread> threads_;
    std::mutex mutex_;
    std::condition_variable start_cv_;
    std::condition_variable done_cv_;
    const std::function<void(std::size_t)>* task_ = nullptr;
    std::size_t count_ = 0;
    std::size_t pending_ = 0;
    std::size_t generation_ = 0;
    bool stop_ = false;
    std::vector<std::exception_ptr> errors_;
};

}  // namespace mbadmm::detail
