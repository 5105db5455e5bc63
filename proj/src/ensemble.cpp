#include "smc/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

namespace smc
{
std::vector<Trajectory> run_ensemble(const SpectralModel& model, const ControlConfig& control,
                                     const SimConfig& sim, const std::vector<Vec2>& initial,
                                     const EnsembleOptions& options)
{
  if (options.members < 1)
  {
    throw ParameterError("ensemble needs at least one member");
  }
  unsigned threads = options.threads != 0 ? options.threads : std::thread::hardware_concurrency();
  threads = std::clamp(threads, 1u, static_cast<unsigned>(options.members));

  std::vector<Trajectory> results(options.members);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::size_t error_index = options.members;
  std::exception_ptr error;

  const auto worker = [&] {
    for (;;)
    {
      const std::size_t i = next.fetch_add(1);
      if (i >= options.members || failed.load())
      {
        return;
      }
      SimConfig member = sim;
      member.seed = member_seed(options.master_seed, i);
      try
      {
        results[i] = run_scenario(model, control, member, initial);
      }
      catch (...)
      {
        std::lock_guard lock(error_mutex);
        // Keep the lowest failing index so the report is reproducible.
        if (i < error_index)
        {
          error_index = i;
          error = std::current_exception();
        }
        failed.store(true);
      }
    }
  };

  std::vector<std::jthread> pool;
  pool.reserve(threads - 1);
  for (unsigned t = 1; t < threads; ++t)
  {
    pool.emplace_back(worker);
  }
  worker();
  pool.clear();

  if (error)
  {
    const std::string prefix =
        "ensemble member " + std::to_string(error_index) + " (seed " +
        std::to_string(member_seed(options.master_seed, error_index)) + "): ";
    try
    {
      std::rethrow_exception(error);
    }
    catch (const NumericalError& e)
    {
      throw NumericalError(prefix + e.what(), e.step());
    }
    catch (const std::exception& e)
    {
      throw Error(prefix + e.what());
    }
  }
  return results;
}

}  // namespace smc
