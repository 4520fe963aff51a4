#include <cxxabi.h>

#include <cstdlib>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include "mimic/reflect.hpp"
#include "mimic/restore.hpp"

namespace mimic {

namespace {

struct Registry {
  std::mutex mutex;
  std::set<std::string, std::less<>> types;
  std::set<std::string, std::less<>> interceptors;
  std::vector<std::shared_ptr<void>> retained;
};

Registry& registry() {
  static Registry* r = new Registry();  // never destroyed: used from static destructors
  return *r;
}

}  // namespace

namespace detail {

void register_type(std::string name) {
  auto& r = registry();
  std::lock_guard lock(r.mutex);
  r.types.insert(std::move(name));
}

void register_interceptor(std::string name) {
  auto& r = registry();
  std::lock_guard lock(r.mutex);
  r.interceptors.insert(std::move(name));
}

void retain(std::shared_ptr<void> owner) {
  auto& r = registry();
  std::lock_guard lock(r.mutex);
  r.retained.push_back(std::move(owner));
}

std::string restore_type_error(const std::string& expected, const std::string& found, const std::string& path) {
  if (!type_known(found)) return "unknown type '" + found + "' at " + path + " (expected '" + expected + "')";
  return "type mismatch at " + path + ": expected '" + expected + "', snapshot has '" + found + "'";
}

}  // namespace detail

bool type_known(std::string_view name) {
  auto& r = registry();
  std::lock_guard lock(r.mutex);
  return r.types.find(name) != r.types.end();
}

bool interceptor_known(std::string_view name) {
  auto& r = registry();
  std::lock_guard lock(r.mutex);
  return r.interceptors.find(name) != r.interceptors.end();
}

std::vector<std::string> known_interceptors() {
  auto& r = registry();
  std::lock_guard lock(r.mutex);
  return {r.interceptors.begin(), r.interceptors.end()};
}

std::string demangle(const char* mangled) {
  int status = 0;
  std::unique_ptr<char, void (*)(void*)> out(abi::__cxa_demangle(mangled, nullptr, nullptr, &status), std::free);
  return status == 0 && out ? std::string(out.get()) : std::string(mangled);
}

}  // namespace mimic
