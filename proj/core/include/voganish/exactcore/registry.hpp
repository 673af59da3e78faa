#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>

namespace voganish::exactcore {

using VarId = std::uint32_t;

// Append-only name table. Interning order is the variable order.
class VarRegistry {
 public:
  VarId intern(std::string_view name);
  std::optional<VarId> find(std::string_view name) const;
  VarId at(std::string_view name) const;
  const std::string& name(VarId id) const;
  std::size_t size() const;

 private:
  mutable std::shared_mutex mu_;
  std::deque<std::string> names_;
  std::unordered_map<std::string, VarId> index_;
};

using RegistryPtr = std::shared_ptr<VarRegistry>;

inline RegistryPtr make_registry() { return std::make_shared<VarRegistry>(); }

}  // namespace voganish::exactcore
