#include <functional>
#include <map>
#include <string>

#include "ofdr/baselines.hpp"
#include "ofdr/closure.hpp"
#include "ofdr/donation.hpp"
#include "ofdr/procedure.hpp"

namespace ofdr {

namespace {

using Factory = std::function<std::unique_ptr<OnlineProcedure>(const ProcedureOptions&)>;

template <typename T>
Factory plain() {
  return [](const ProcedureOptions& o) { return std::make_unique<T>(o.gamma, o.delta); };
}

const std::map<std::string, Factory, std::less<>>& registry() {
  static const std::map<std::string, Factory, std::less<>> table = {
      {"elond", plain<Elond>()},
      {"rlond", plain<Rlond>()},
      {"online-ebh", plain<OnlineEbh>()},
      {"etoad", plain<Etoad>()},
      {"closed-elond", plain<ClosedElond>()},
      {"closed-elond-alt", plain<ClosedElondAlt>()},
      {"closed-rlond", plain<ClosedRlond>()},
      {"donation-elond", plain<DonationElond>()},
      {"donation-rlond", plain<DonationRlond>()},
      {"donation-online-ebh", plain<DonationOnlineEbh>()},
      {"donation-etoad", plain<DonationEtoad>()},
      {"randomized-donation-elond",
       [](const ProcedureOptions& o) {
         return std::make_unique<RandomizedDonationElond>(o.gamma, o.delta, o.seed);
       }},
  };
  return table;
}

}  // namespace

std::vector<std::string> procedure_names() {
  std::vector<std::string> names;
  for (const auto& [name, _] : registry()) names.push_back(name);
  return names;
}

std::unique_ptr<OnlineProcedure> make_procedure(std::string_view name, const ProcedureOptions& opts) {
  const auto& table = registry();
  auto it = table.find(name);
  if (it == table.end()) throw ConfigError("unknown procedure '" + std::string(name) + "'");
  return it->second(opts);
}

}  // namespace ofdr
