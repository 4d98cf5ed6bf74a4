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

#ifndef EUQ_SEARCH_EXECUTOR_HPP_
#define EUQ_SEARCH_EXECUTOR_HPP_

#include <condition_variable>
#include <deque>
#include <mutex>
#include <thread>
#include <vector>

#include "euq/search/types.hpp"

namespace euq::search {

// Nonblocking evaluation service: submit never blocks the manager and
// check_finished returns immediately with whatever completed since the last
// call. Worker exceptions surface as failed results, never as crashes.
class Executor {
 public:
  virtual ~Executor() = default;
  virtual void submit(EvalRequest request) = 0;
  virtual std::vector<EvalResult> check_finished() = 0;
  virtual std::size_t pending() const = 0;
};

// Deterministic in-process executor: jobs run one at a time inside
// check_finished, in submission order.
class SerialExecutor final : public Executor {
 public:
  explicit SerialExecutor(Evaluator evaluator);

  void submit(EvalRequest request) override;
  std::vector<EvalResult> check_finished() override;
  std::size_t pending() const override;

 private:
  Evaluator evaluator_;
  std::deque<EvalRequest> queue_;
};

// Thread pool over a shared job queue.
class WorkerPool final : public Executor {
 public:
  WorkerPool(Evaluator evaluator, int workers);
  ~WorkerPool() override;

  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  void submit(EvalRequest request) override;
  std::vector<EvalResult> check_finished() override;
  std::size_t pending() const override;

  void shutdown();

 private:
  void worker_loop();

  Evaluator evaluator_;
  mutable std::mutex mutex_;
  std::condition_variable work_available_;
  std::deque<EvalRequest> queue_;
  std::vector<EvalResult> done_;
  std::size_t in_flight_ = 0;
  bool stopping_ = false;
  std::vector<std::thread> threads_;
};

// Runs the evaluator inside a try block and converts exceptions into failed
// results carrying the message.
EvalResult run_guarded(const Evaluator& evaluator, const EvalRequest& request);

}  // namespace euq::search

#endif  // EUQ_SEARCH_EXECUTOR_HPP_
