// Copyright 2026 The EUQ Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "euq/search/executor.hpp"

#include <utility>

#include "euq/errors.hpp"

namespace euq::search {

EvalResult run_guarded(const Evaluator& evaluator, const EvalRequest& request) {
  try {
    EvalResult r = evaluator(request);
    r.id = request.id;
    return r;
  } catch (const std::exception& e) {
    EvalResult r;
    r.id = request.id;
    r.failed = true;
    r.error = e.what();
    return r;
  } catch (...) {
    EvalResult r;
    r.id = request.id;
    r.failed = true;
    r.error = "unknown evaluator failure";
    return r;
  }
}

SerialExecutor::SerialExecutor(Evaluator evaluator) : evaluator_(std::move(evaluator)) {
  if (!evaluator_) throw ValidationError("executor needs an evaluator");
}

void SerialExecutor::submit(EvalRequest request) { queue_.push_back(std::move(request)); }

std::vector<EvalResult> SerialExecutor::check_finished() {
  std::vector<EvalResult> out;
  if (queue_.empty()) return out;
  const EvalRequest request = std::move(queue_.front());
  queue_.pop_front();
  out.push_back(run_guarded(evaluator_, request));
  return out;
}

std::size_t SerialExecutor::pending() const { return queue_.size(); }

WorkerPool::WorkerPool(Evaluator evaluator, int workers) : evaluator_(std::move(evaluator)) {
  if (!evaluator_) throw ValidationError("executor needs an evaluator");
  if (workers < 1) throw ValidationError("worker count must be positive");
  threads_.reserve(static_cast<std::size_t>(workers));
  for (int i = 0; i < workers; ++i) threads_.emplace_back([this] { worker_loop(); });
}

WorkerPool::~WorkerPool() { shutdown(); }

void WorkerPool::shutdown() {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    if (stopping_) return;
    stopping_ = true;
  }
  work_available_.notify_all();
  for (std::thread& t : threads_) {
    if (t.joinable()) t.join();
  }
}

void WorkerPool::submit(EvalRequest request) {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    if (stopping_) throw ValidationError("submit on a stopped worker pool");
    queue_.push_back(std::move(request));
  }
  work_available_.notify_one();
}

std::vector<EvalResult> WorkerPool::check_finished() {
  std::lock_guard<std::mutex> lock(mutex_);
  std::vector<EvalResult> out;
  out.swap(done_);
  return out;
}

std::size_t WorkerPool::pending() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return queue_.size() + in_flight_;
}

void WorkerPool::worker_loop() {
  for (;;) {
    EvalRequest request;
    {
      std::unique_lock<std::mutex> lock(mutex_);
      work_available_.wait(lock, [this] { return stopping_ || !queue_.empty(); });
      if (queue_.empty()) return;  // stopping
      request = std::move(queue_.front());
      queue_.pop_front();
      ++in_flight_;
    }
    EvalResult result = run_guarded(evaluator_, request);
    {
      std::lock_guard<std::mutex> lock(mutex_);
      done_.push_back(std::move(result));
      --in_flight_;
    }
  }
}

}  // namespace euq::search
