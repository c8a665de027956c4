#include "newsreuse/log.hpp"

#include <iostream>
#include <mutex>
#include <utility>

namespace newsreuse::log {
namespace {

std::mutex g_mutex;

Sink& sink() {
  static Sink s = [](std::string_view message) { std::cerr << "warning: " << message << '\n'; };
  return s;
}

}  // namespace

Sink set_warning_sink(Sink next) {
  std::lock_guard lock(g_mutex);
  return std::exchange(sink(), std::move(next));
}

void warn(std::string_view message) {
  std::lock_guard lock(g_mutex);
  if (sink()) sink()(message);
}

}  // namespace newsreuse::log
