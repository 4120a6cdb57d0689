#include "fedfraud/datagen/reference_data.hpp"

#include <map>
#include <stdexcept>

namespace fedfraud::datagen {

const std::vector<City>& cities() {
    static const std::vector<City> kCities = {
        {"New York", "US", 40.7128, -74.0060, "USD"},
        {"Chicago", "US", 41.8781, -87.6298, "USD"},
        {"San Francisco", "US", 37.7749, -122.4194, "USD"},
        {"Houston", "US", 29.7604, -95.3698, "USD"},
        {"Toronto", "CA", 43.6532, -79.3832, "CAD"},
        {"Vancouver", "CA", 49.2827, -123.1207, "CAD"},
        {"London", "GB", 51.5074, -0.1278, "GBP"},
        {"Manchester", "GB", 53.4808, -2.2426, "GBP"},
        {"Frankfurt", "DE", 50.1109, 8.6821, "EUR"},
        {"Paris", "FR", 48.8566, 2.3522, "EUR"},
        {"Madrid", "ES", 40.4168, -3.7038, "EUR"},
        {"Milan", "IT", 45.4642, 9.1900, "EUR"},
        {"Amsterdam", "NL", 52.3676, 4.9041, "EUR"},
        {"Zurich", "CH", 47.3769, 8.5417, "CHF"},
        {"Geneva", "CH", 46.2044, 6.1432, "CHF"},
        {"Tokyo", "JP", 35.6762, 139.6503, "JPY"},
        {"Osaka", "JP", 34.6937, 135.5023, "JPY"},
        {"Singapore", "SG", 1.3521, 103.8198, "SGD"},
        {"Sydney", "AU", -33.8688, 151.2093, "AUD"},
        {"Melbourne", "AU", -37.8136, 144.9631, "AUD"},
        {"Mumbai", "IN", 19.0760, 72.8777, "INR"},
        {"Delhi", "IN", 28.7041, 77.1025, "INR"},
        {"Sao Paulo", "BR", -23.5505, -46.6333, "BRL"},
        {"Rio de Janeiro", "BR", -22.9068, -43.1729, "BRL"},
        {"Johannesburg", "ZA", -26.2041, 28.0473, "USD"},
        {"Dublin", "IE", 53.3498, -6.2603, "EUR"},
        {"Stockholm", "SE", 59.3293, 18.0686, "EUR"},
        {"Auckland", "NZ", -36.8485, 174.7633, "AUD"},
        {"Hong Kong", "HK", 22.3193, 114.1694, "USD"},
        {"Seoul", "KR", 37.5665, 126.9780, "USD"},
    };
    return kCities;
}

const std::vector<std::string>& first_names() {
    static const std::vector<std::string> kNames = {
        "Ada",    "Boris",  "Carla", "Dmitri", "Elena", "Farid",  "Grace", "Hiro",
        "Ines",   "Jonas",  "Keiko", "Lukas",  "Mira",  "Noel",   "Olga",  "Pavel",
        "Quinn",  "Rosa",   "Sven",  "Tara",   "Umar",  "Vera",   "Wale",  "Xenia",
        "Yusuf",  "Zara",   "Amir",  "Bea",    "Chen",  "Dana",   "Emil",  "Freya",
    };
    return kNames;
}

const std::vector<std::string>& last_names() {
    static const std::vector<std::string> kNames = {
        "Abbott",   "Bauer",   "Costa",    "Dube",    "Eriksen", "Fischer", "Garcia",
        "Haaland",  "Ito",     "Jensen",   "Kaur",    "Lindt",   "Moreau",  "Novak",
        "Okafor",   "Petrov",  "Qureshi",  "Rossi",   "Sato",    "Tanaka",  "Ueda",
        "Vargas",   "Weber",   "Xu",       "Yilmaz",  "Zhang",   "Andersen", "Brandt",
    };
    return kNames;
}

double units_per_usd(const std::string& currency) {
    static const std::map<std::string, double> kRates = {
        {"USD", 1.0},  {"EUR", 0.92},  {"GBP", 0.79},   {"JPY", 149.50}, {"CHF", 0.88},
        {"CAD", 1.36}, {"AUD", 1.52},  {"INR", 83.20},  {"BRL", 4.95},   {"SGD", 1.34},
    };
    auto it = kRates.find(currency);
    if (it == kRates.end()) throw std::invalid_argument("unknown currency: " + currency);
    return it->second;
}

double exchange_rate(const std::string& from, const std::string& to) {
    if (from == to) return 1.0;
    return units_per_usd(to) / units_per_usd(from);
}

}  // namespace fedfraud::datagen
