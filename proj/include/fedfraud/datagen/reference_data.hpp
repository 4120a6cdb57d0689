#pragma once

#include <string>
#include <vector>

namespace fedfraud::datagen {

struct City {
    const char* name;
    const char* country;
    double lat;
    double lon;
    const char* currency;  // ISO 4217
};

// Bundled lookup tables used for synthetic identities. Coordinates are real
// land locations so that perturbed tower positions stay plausible.
const std::vector<City>& cities();
const std::vector<std::string>& first_names();
const std::vector<std::string>& last_names();

// Static exchange-rate table (units of currency per USD). Identity rate for
// same-currency pairs; unknown codes are an error.
double units_per_usd(const std::string& currency);

// Multiplier converting an amount denominated in `from` into `to`.
double exchange_rate(const std::string& from, const std::string& to);

}  // namespace fedfraud::datagen
