#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <list>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <type_traits>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace mimic {

/// Grants the library access to private reflection hooks and constructors.
/// Reflected types expose their state with a cereal-style member:
///
///   template <class Visitor>
///   void mimic_fields(Visitor& v) { v("count", count_); v("next", next_); }
///
/// and may declare `friend struct mimic::Access;` to keep it private.
/// Derived types call `Base::mimic_fields(v)` first to expose inherited state.
struct Access {
  struct Probe {
    template <class F>
    void operator()(std::string_view, F&) {}
  };

  template <class T>
  static constexpr bool reflected = requires(T& t, Probe& p) { t.mimic_fields(p); };

  template <class T, class V>
  static void visit(T& t, V& v) {
    t.mimic_fields(v);
  }

  template <class T>
  static T* make() {
    return new T();
  }
};

template <class T>
concept Reflected = Access::reflected<T>;

namespace detail {

template <class T>
constexpr std::string_view pretty_name() {
  std::string_view p = __PRETTY_FUNCTION__;
  auto start = p.find("T = ");
  if (start == std::string_view::npos) return "?";
  start += 4;
  auto end = p.find_first_of(";]", start);
  return p.substr(start, end - start);
}

template <class T, template <class...> class Tmpl>
struct is_specialization : std::false_type {};
template <template <class...> class Tmpl, class... A>
struct is_specialization<Tmpl<A...>, Tmpl> : std::true_type {};

template <class T>
struct is_std_array : std::false_type {};
template <class T, std::size_t N>
struct is_std_array<std::array<T, N>> : std::true_type {};

void register_type(std::string name);
void register_interceptor(std::string name);

template <class T>
struct TypeRegistration {
  static inline const bool value = (register_type(std::string(pretty_name<T>())), true);
};

}  // namespace detail

/// Registered reflected types (populated by template instantiation).
bool type_known(std::string_view name);
/// Registered interceptor interface names.
bool interceptor_known(std::string_view name);
std::vector<std::string> known_interceptors();

template <class T>
std::string type_name();

namespace detail {

template <class T>
std::string args_name(std::string_view tmpl) {
  return std::string(tmpl) + "<" + type_name<T>() + ">";
}

}  // namespace detail

/// Stable, readable names: fixed spellings for builtins and std containers,
/// compiler-provided qualified names for user types.
template <class T>
std::string type_name() {
  using U = std::remove_cv_t<T>;
  if constexpr (std::is_same_v<U, bool>) return "bool";
  else if constexpr (std::is_same_v<U, char>) return "char";
  else if constexpr (std::is_same_v<U, signed char>) return "signed char";
  else if constexpr (std::is_same_v<U, unsigned char>) return "unsigned char";
  else if constexpr (std::is_same_v<U, short>) return "short";
  else if constexpr (std::is_same_v<U, unsigned short>) return "unsigned short";
  else if constexpr (std::is_same_v<U, int>) return "int";
  else if constexpr (std::is_same_v<U, unsigned>) return "unsigned";
  else if constexpr (std::is_same_v<U, long>) return "long";
  else if constexpr (std::is_same_v<U, unsigned long>) return "unsigned long";
  else if constexpr (std::is_same_v<U, long long>) return "long long";
  else if constexpr (std::is_same_v<U, unsigned long long>) return "unsigned long long";
  else if constexpr (std::is_same_v<U, float>) return "float";
  else if constexpr (std::is_same_v<U, double>) return "double";
  else if constexpr (std::is_same_v<U, long double>) return "long double";
  else if constexpr (std::is_same_v<U, std::string>) return "std::string";
  else if constexpr (std::is_same_v<U, std::string_view>) return "std::string_view";
  else if constexpr (std::is_same_v<U, const char*> || std::is_same_v<U, char*>) return "const char*";
  else if constexpr (std::is_pointer_v<U>) return type_name<std::remove_pointer_t<U>>() + "*";
  else if constexpr (detail::is_specialization<U, std::shared_ptr>::value) return detail::args_name<typename U::element_type>("std::shared_ptr");
  else if constexpr (detail::is_specialization<U, std::unique_ptr>::value) return detail::args_name<typename U::element_type>("std::unique_ptr");
  else if constexpr (detail::is_specialization<U, std::weak_ptr>::value) return detail::args_name<typename U::element_type>("std::weak_ptr");
  else if constexpr (detail::is_specialization<U, std::optional>::value) return detail::args_name<typename U::value_type>("std::optional");
  else if constexpr (detail::is_specialization<U, std::vector>::value) return detail::args_name<typename U::value_type>("std::vector");
  else if constexpr (detail::is_specialization<U, std::deque>::value) return detail::args_name<typename U::value_type>("std::deque");
  else if constexpr (detail::is_specialization<U, std::list>::value) return detail::args_name<typename U::value_type>("std::list");
  else if constexpr (detail::is_specialization<U, std::set>::value) return detail::args_name<typename U::value_type>("std::set");
  else if constexpr (detail::is_specialization<U, std::unordered_set>::value) return detail::args_name<typename U::value_type>("std::unordered_set");
  else if constexpr (detail::is_std_array<U>::value) return "std::array<" + type_name<typename U::value_type>() + ", " + std::to_string(std::tuple_size_v<U>) + ">";
  else if constexpr (detail::is_specialization<U, std::map>::value) return "std::map<" + type_name<typename U::key_type>() + ", " + type_name<typename U::mapped_type>() + ">";
  else if constexpr (detail::is_specialization<U, std::unordered_map>::value) return "std::unordered_map<" + type_name<typename U::key_type>() + ", " + type_name<typename U::mapped_type>() + ">";
  else return std::string(detail::pretty_name<U>());
}

/// Specialized by MIMIC_INTERCEPTOR for each external interface.
template <class Iface>
struct InterceptorFor;

template <class Iface>
concept Interceptable = requires { typename InterceptorFor<Iface>::type; };

namespace detail {

template <class T>
struct pointee {
  using type = void;
};
template <class T>
struct pointee<T*> {
  using type = T;
};
template <class T>
struct pointee<std::shared_ptr<T>> {
  using type = T;
};

template <class T>
using pointee_t = typename pointee<std::remove_cvref_t<T>>::type;

}  // namespace detail

/// A field or parameter that the recorder can swap for a proxy and the test
/// for a mock: a raw or shared pointer to an interface with an interceptor.
template <class T>
concept SubstitutableBinding = !std::is_void_v<detail::pointee_t<T>> && Interceptable<detail::pointee_t<T>>;

/// Demangled dynamic type name of an exception or polymorphic object.
std::string demangle(const char* mangled);

}  // namespace mimic

/// Declares `Impl` as the interceptor of `Iface`. Use at global scope.
#define MIMIC_INTERCEPTOR(Iface, Impl)                                                          \
  template <>                                                                                   \
  struct mimic::InterceptorFor<Iface> {                                                         \
    using type = Impl;                                                                          \
    static inline const bool registered =                                                       \
        (::mimic::detail::register_interceptor(::mimic::type_name<Iface>()), true);             \
  }
