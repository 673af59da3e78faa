#include "voganish/exactcore/rat.hpp"

#include "voganish/exactcore/errors.hpp"
#include "voganish/exactcore/registry.hpp"

#include <mutex>
#include <stdexcept>

namespace voganish::exactcore {

Rat parse_rat(std::string_view s) {
  std::string str(s);
  while (!str.empty() && str.front() == ' ') str.erase(str.begin());
  while (!str.empty() && str.back() == ' ') str.pop_back();
  if (!str.empty() && str.front() == '+') str.erase(str.begin());
  Rat r;
  if (str.empty() || r.set_str(str, 10) != 0) throw ParseError("bad rational '" + std::string(s) + "'", 0);
  if (r.get_den() == 0) throw ParseError("zero denominator in '" + std::string(s) + "'", 0);
  r.canonicalize();
  return r;
}

std::string to_string(const Rat& r) { return r.get_str(10); }

VarId VarRegistry::intern(std::string_view name) {
  {
    std::shared_lock lock(mu_);
    auto it = index_.find(std::string(name));
    if (it != index_.end()) return it->second;
  }
  std::unique_lock lock(mu_);
  auto it = index_.find(std::string(name));
  if (it != index_.end()) return it->second;
  VarId id = static_cast<VarId>(names_.size());
  names_.emplace_back(name);
  index_.emplace(names_.back(), id);
  return id;
}

std::optional<VarId> VarRegistry::find(std::string_view name) const {
  std::shared_lock lock(mu_);
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

VarId VarRegistry::at(std::string_view name) const {
  auto id = find(name);
  if (!id) throw std::out_of_range("unknown variable " + std::string(name));
  return *id;
}

const std::string& VarRegistry::name(VarId id) const {
  std::shared_lock lock(mu_);
  return names_.at(id);
}

std::size_t VarRegistry::size() const {
  std::shared_lock lock(mu_);
  return names_.size();
}

}  // namespace voganish::exactcore
