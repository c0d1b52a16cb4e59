#ifndef ZIPBOOST_LOG_H_
#define ZIPBOOST_LOG_H_

#include <functional>
#include <string>
#include <string_view>

namespace zipboost {

using WarningSink = std::function<void(std::string_view)>;

// Warnings go to stderr unless a sink is installed. Returns the previous sink.
WarningSink set_warning_sink(WarningSink sink);

void warn(const std::string& message);

// Installs a sink for the lifetime of the object and restores the old one.
class ScopedWarningSink {
 public:
  explicit ScopedWarningSink(WarningSink sink) : previous_(set_warning_sink(std::move(sink))) {}
  ~ScopedWarningSink() { set_warning_sink(std::move(previous_)); }
  ScopedWarningSink(const ScopedWarningSink&) = delete;
  ScopedWarningSink& operator=(const ScopedWarningSink&) = delete;

 private:
  WarningSink previous_;
};

}  // namespace zipboost

#endif  // ZIPBOOST_LOG_H_
