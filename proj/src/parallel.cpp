#include "contractio/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace contractio {

namespace {

std::size_t hardware() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : n;
}

std::size_t from_env() {
  const char* env = std::getenv("CONTRACTIO_THREADS");
  if (env == nullptr) return hardware();
  try {
    return parse_thread_count(env);
  } catch (const std::invalid_argument&) {
    return hardware();
  }
}

std::atomic<std::size_t>& slot() {
  static std::atomic<std::size_t> count{from_env()};
  return count;
}

}  // namespace

std::size_t parse_thread_count(const char* text) {
  std::string s(text);
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos || s.size() > 6) {
    throw std::invalid_argument("CONTRACTIO_THREADS must be a non-negative integer, got '" + s + "'");
  }
  const std::size_t n = std::stoul(s);
  return n == 0 ? hardware() : n;
}

std::size_t thread_count() { return slot().load(std::memory_order_relaxed); }

void set_thread_count(std::size_t n) { slot().store(n == 0 ? hardware() : n, std::memory_order_relaxed); }

}  // namespace contractio
