#include "kitaoka/catalog.hpp"

#include <cstdlib>
#include <fstream>
#include <mutex>

namespace kitaoka {

namespace {

// Unit generators of the non-quadratic fields were chosen to minimise the
// regulator among small-house units; they are checked against a bounded unit
// search at run time, not proved fundamental here.
constexpr const char* builtin_json = R"([
  {"id": "q", "degree": 1, "poly": [0, 1], "integral_basis": [["1"]],
   "units": [], "disc": "1"},
  {"id": "qsqrt2", "degree": 2, "poly": [-2, 0, 1], "integral_basis": [["1", "0"], ["0", "1"]],
   "units": ["t+1"], "disc": "8", "known_positive": true},
  {"id": "qsqrt3", "degree": 2, "poly": [-3, 0, 1], "integral_basis": [["1", "0"], ["0", "1"]],
   "units": ["t+2"], "disc": "12", "known_positive": true},
  {"id": "qsqrt5", "degree": 2, "poly": [-1, -1, 1], "integral_basis": [["1", "0"], ["0", "1"]],
   "units": ["t"], "disc": "5", "known_positive": true},
  {"id": "qsqrt6", "degree": 2, "poly": [-6, 0, 1], "integral_basis": [["1", "0"], ["0", "1"]],
   "units": ["2*t+5"], "disc": "24"},
  {"id": "qsqrt13", "degree": 2, "poly": [-3, -1, 1], "integral_basis": [["1", "0"], ["0", "1"]],
   "units": ["t+1"], "disc": "13"},
  {"id": "qsqrt17", "degree": 2, "poly": [-4, -1, 1], "integral_basis": [["1", "0"], ["0", "1"]],
   "units": ["2*t+3"], "disc": "17"},
  {"id": "qsqrt33", "degree": 2, "poly": [-8, -1, 1], "integral_basis": [["1", "0"], ["0", "1"]],
   "units": ["8*t+19"], "disc": "33"},
  {"id": "zeta7", "degree": 3, "poly": [-1, -2, 1, 1],
   "integral_basis": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]],
   "units": ["t", "t+1"], "disc": "49"},
  {"id": "zeta20", "degree": 4, "poly": [5, 0, -5, 0, 1],
   "integral_basis": [["1", "0", "0", "0"], ["0", "1", "0", "0"], ["0", "0", "1", "0"], ["0", "0", "0", "1"]],
   "units": ["t^2-2", "t+1", "t+2"], "disc": "2000"},
  {"id": "qsqrt2sqrt3", "degree": 4, "poly": [1, 0, -10, 0, 1],
   "integral_basis": [["1", "0", "0", "0"], ["0", "-9/2", "0", "1/2"], ["0", "11/2", "0", "-1/2"],
                      ["-5/4", "-9/4", "1/4", "1/4"]],
   "units": ["1/4*t^3-1/4*t^2-9/4*t+5/4", "1/2*t^3-9/2*t+1", "t"], "disc": "2304"}
])";

[[noreturn]] void malformed(const std::string& what) { fail(Errc::MalformedSpec, "field catalog: " + what); }

mpz_class integer_of(const nlohmann::json& v, const char* key)
{
    if (v.is_number_integer()) return mpz_class(std::to_string(v.get<long long>()));
    if (v.is_string()) {
        mpz_class z;
        if (z.set_str(v.get<std::string>(), 10) != 0) malformed(std::string("bad integer in ") + key);
        return z;
    }
    malformed(std::string("expected an integer in ") + key);
}

mpq_class rational_of(const nlohmann::json& v)
{
    if (v.is_number_integer()) return mpq_class(mpz_class(std::to_string(v.get<long long>())));
    if (!v.is_string()) malformed("integral_basis entries must be rational strings");
    mpq_class q;
    if (q.set_str(v.get<std::string>(), 10) != 0 || q.get_den() == 0) malformed("bad rational in integral_basis");
    q.canonicalize();
    return q;
}

} // namespace

FieldSpec field_spec_from_json(const nlohmann::json& j)
{
    if (!j.is_object()) malformed("entry must be an object");
    for (const char* key : {"id", "degree", "poly", "integral_basis", "disc"})
        if (!j.contains(key)) malformed(std::string("missing key ") + key);
    FieldSpec s;
    if (!j["id"].is_string()) malformed("id must be a string");
    s.id = j["id"].get<std::string>();
    if (!j["degree"].is_number_integer()) malformed("degree must be an integer");
    s.degree = j["degree"].get<int>();
    if (!j["poly"].is_array()) malformed("poly must be an array");
    for (const auto& c : j["poly"]) s.poly.push_back(integer_of(c, "poly"));
    if (!j["integral_basis"].is_array()) malformed("integral_basis must be an array");
    for (const auto& row : j["integral_basis"]) {
        if (!row.is_array()) malformed("integral_basis rows must be arrays");
        std::vector<mpq_class> r;
        for (const auto& c : row) r.push_back(rational_of(c));
        s.integral_basis.push_back(std::move(r));
    }
    if (j.contains("units")) {
        if (!j["units"].is_array()) malformed("units must be an array");
        for (const auto& u : j["units"]) {
            if (!u.is_string()) malformed("units must be element strings");
            s.units.push_back(u.get<std::string>());
        }
    }
    s.disc = integer_of(j["disc"], "disc");
    if (j.contains("known_positive")) {
        if (!j["known_positive"].is_boolean()) malformed("known_positive must be a boolean");
        s.known_positive = j["known_positive"].get<bool>();
    }
    return s;
}

nlohmann::ordered_json field_spec_to_json(const FieldSpec& s)
{
    nlohmann::ordered_json j;
    j["id"] = s.id;
    j["degree"] = s.degree;
    auto poly = nlohmann::ordered_json::array();
    for (const auto& c : s.poly) poly.push_back(c.fits_slong_p() ? nlohmann::ordered_json(c.get_si()) : nlohmann::ordered_json(c.get_str()));
    j["poly"] = poly;
    auto basis = nlohmann::ordered_json::array();
    for (const auto& row : s.integral_basis) {
        auto r = nlohmann::ordered_json::array();
        for (const auto& q : row) r.push_back(q.get_str());
        basis.push_back(r);
    }
    j["integral_basis"] = basis;
    j["units"] = s.units;
    j["disc"] = s.disc.get_str();
    if (s.known_positive) j["known_positive"] = *s.known_positive;
    return j;
}

Catalog Catalog::builtin()
{
    Catalog c;
    c.merge(nlohmann::json::parse(builtin_json));
    return c;
}

void Catalog::merge(const nlohmann::json& doc)
{
    const nlohmann::json* list = &doc;
    if (doc.is_object() && doc.contains("fields")) list = &doc["fields"];
    if (!list->is_array()) malformed("document must be an array of fields");
    for (const auto& entry : *list) {
        FieldSpec s = field_spec_from_json(entry);
        if (!specs_.count(s.id)) order_.push_back(s.id);
        loaded_.erase(s.id);
        specs_[s.id] = std::move(s);
    }
}

void Catalog::merge_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) malformed("cannot open " + path.string());
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        malformed(path.string() + ": " + e.what());
    }
    merge(doc);
}

std::vector<std::string> Catalog::ids() const { return order_; }

const FieldSpec& Catalog::spec(const std::string& id) const
{
    auto it = specs_.find(id);
    if (it == specs_.end()) fail(Errc::UnknownField, "unknown field id '" + id + "'");
    return it->second;
}

FieldPtr Catalog::field(const std::string& id) const
{
    auto it = loaded_.find(id);
    if (it != loaded_.end()) return it->second;
    FieldPtr f = load_field(spec(id));
    loaded_[id] = f;
    return f;
}

Catalog load_catalog(const std::string& path)
{
    Catalog c = Catalog::builtin();
    std::string p = path;
    if (p.empty())
        if (const char* env = std::getenv("KITAOKA_CATALOG")) p = env;
    if (!p.empty()) c.merge_file(p);
    return c;
}

FieldPtr builtin_field(const std::string& id)
{
    static std::mutex mu;
    static Catalog cat = Catalog::builtin();
    std::lock_guard<std::mutex> lock(mu);
    return cat.field(id);
}

} // namespace kitaoka
