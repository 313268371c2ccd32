#include "macro/catalog.hpp"

#include "macro/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <set>

namespace macro {

using constants::amu;
using constants::h;
using constants::k_B;
using constants::pi;
using json = nlohmann::json;

namespace {

PointInterference point(double mass_amu, double t, double f) { return {mass_amu * amu, t, f, std::nullopt}; }

TalbotLau gold_talbot_lau(double mass_amu)
{
    // near-field cluster interferometer run at one Talbot time
    const double M = mass_amu * amu, d = 78.5e-9;
    return {sphere_from_density(M, 19300.0), M * d * d / h, d, 0.5};
}

std::vector<CatalogEntry> make_catalog()
{
    std::vector<CatalogEntry> c;
    auto add = [&](CatalogEntry e) { c.push_back(std::move(e)); };

    add({"maier-leibnitz1962", "neutron double slit", 1962, point(1, 9.7 / 907, 0.6), 4.8, 0.2, false,
         "L1+L2 = 9.7 m at 907 m/s", {}});
    add({"zeilinger1982", "neutron double slit", 1982, point(1, 10.0 / 216, 0.9), 6.2, 0.2, false,
         "L1+L2 = 10 m at 216 m/s", {}});
    add({"keith1988", "sodium atom grating diffraction", 1988, point(23, 2.5 / 1000, 0.5), 6.8, 0.2, false,
         "L1+L2 = 2.5 m at 1000 m/s", {}});
    add({"shimizu1992", "cold neon double slit", 1992, point(20, 0.2, 0.8), 9.1, 0.2, false,
         "falling atoms, 0.2 s time of flight", {}});
    add({"grisenti1999", "helium trimer grating diffraction", 1999, point(84, 0.97 / 396, 0.8), 8.3, 0.2, false,
         "L1+L2 = 0.97 m at 396 m/s; 8.4 printed elsewhere for the same run", 8.4});
    add({"arndt1999", "C60 grating diffraction", 1999, point(720, 2.39 / 226, 0.6), 10.6, 0.2, false,
         "L1+L2 = 2.39 m at 226 m/s", {}});
    add({"borde1994", "I2 Ramsey-Borde interferometer", 1994, point(254, 0.037 / 350, 0.33), 7.3, 0.2, false,
         "37 mm at 350 m/s", {}});
    add({"chapman1995", "Na2 Mach-Zehnder interferometer", 1995, point(46, 2.6e-3, 0.35), 7.2, 0.2, false,
         "2.1 m at 820 m/s", {}});
    add({"peters2001", "Cs atom gravimeter", 2001, point(132.9, 0.32, 0.62), std::nullopt, 0.2, false,
         "interrogation time 2T with T = 160 ms", {}});
    add({"chung2009", "Cs atom interferometer", 2009, point(132.9, 0.8, 0.33), std::nullopt, 0.2, false,
         "interrogation time 2T with T = 400 ms", {}});
    add({"andrews1997", "interfering sodium condensates", 1997, point(23, 0.04, 0.75), 8.4, 0.2, false,
         "40 ms time of flight, single-atom rate", {}});
    add({"jo2007", "split sodium condensate", 2007, point(23, 0.2, 0.15), 8.3, 0.2, false,
         "200 ms, single sodium atom mass", {}});
    add({"brezger2002", "C70 Talbot-Lau interferometer", 2002,
         TalbotLau{sphere_from_density(840 * amu, 1700.0), 0.38 / 190, 991e-9, 0.9}, std::nullopt, 1.0, true,
         "0.38 m grating separation at 190 m/s; fringe visibility assumed", {}});

    add({"friedman2000", "Nb rf SQUID current superposition", 2000,
         Squid{SuperconductorMaterial::niobium(), 560e-6, 5e-12, 1e-9}, 5.2, 0.5, false,
         "560 um loop, 5 um^2 cross section, T2 = 1 ns", {}});
    add({"wal2000", "Al persistent-current qubit", 2000,
         Squid{SuperconductorMaterial::aluminium(), 20e-6, 36000e-18, 15e-9}, 3.3, 0.5, false,
         "20 um loop, 36000 nm^2 cross section, T2 = 15 ns", {}});
    add({"hime2006", "Al flux qubit", 2006, Squid{SuperconductorMaterial::aluminium(), 180e-6, 1e-12, 10e-9},
         std::nullopt, 0.5, false, "180 um loop, 1 um^2 cross section, T2 = 10 ns; no value printed", {}});

    add({"satellite", "satellite Cs atom interferometer", std::nullopt, point(132.9, 4000.0, 0.5), 14.5, 0.1,
         false, "interrogation time 2T with T = 2000 s, f assumed 0.5", {}});
    add({"micromirror", "oscillating micromirror", std::nullopt,
         Micromirror{10e-6, 2300.0, 2 * pi * 500.0, 170e-15, 1.63, 0.5}, 19.0, 0.3, false,
         "10 um silicon cube, 500 Hz, one period", {}});
    const double mr = 7.5e-6, mb = 100e-9;
    add({"membrane", "oscillating micromembrane", std::nullopt,
         Membrane{mr, mb, 48e-15 / (pi * mr * mr * mb), 2 * pi * 10.56e6, 1000.0, 0.5}, 11.5, 0.3, false,
         "48 pg aluminium drum, 10.56 MHz, 1000 cycles", {}});
    add({"squid-large", "hypothetical large Al SQUID", std::nullopt,
         Squid{SuperconductorMaterial::aluminium(), 20e-3, 100e-12, 1e-3}, 14.5, 0.5, false,
         "20 mm loop, 100 um^2 cross section, T2 = 1 ms", {}});
    add({"talbot-lau-1e5", "Talbot-Lau interference at 1e5 amu", std::nullopt, gold_talbot_lau(1e5), 14.5, 1.0,
         true, "gold cluster, 78.5 nm grating, one Talbot time, f = 0.5 assumed", {}});
    add({"talbot-lau-1e8", "Talbot-Lau interference at 1e8 amu", std::nullopt, gold_talbot_lau(1e8), 23.3, 1.0,
         true, "gold cluster, 78.5 nm grating, one Talbot time, f = 0.5 assumed", {}});
    const double nr = 20e-9, nrho = 2200.0;
    add({"nanosphere", "nanosphere double slit", std::nullopt,
         GratingDiffraction{sphere_from_density(nrho * 4.0 / 3.0 * pi * nr * nr * nr, nrho), 1e-3, 0.1, 2, 52e-9,
                            0.5, 0.0, 0.0, 1.0, 0.0, 0.5},
         20.5, 0.5, true, "silica sphere R = 20 nm, d = 52 nm; flight lengths and velocity assumed", {}});
    add({"cat", "Schroedinger cat gedanken experiment", std::nullopt, CatSuperposition{4.0, 1000.0, 0.1, 1.0}, 57.0,
         1.0, false, "4 kg of water, 10 cm apart for 1 s", {}});
    add({"gas-rb", "Rb gas heating bound", std::nullopt, GasHeating{86.9 * amu, 1.5 * k_B * 1e-6}, std::nullopt,
         0.2, true, "heating below 1 uK/s", {}});
    return c;
}

// Tracks which keys of an object were read so leftovers can be reported.
class Fields {
public:
    Fields(const json& j, std::string path) : j_(j), path_(std::move(path))
    {
        if (!j_.is_object()) throw ParseError(path_.empty() ? "document" : path_, "expected an object");
    }

    bool has(const std::string& k) const { return j_.contains(k); }

    const json& raw(const std::string& k)
    {
        if (!j_.contains(k)) throw ParseError(name(k), "missing");
        used_.insert(k);
        return j_.at(k);
    }

    double num(const std::string& k)
    {
        const json& v = raw(k);
        if (!v.is_number()) throw ParseError(name(k), "expected a number");
        double d = v.get<double>();
        if (!std::isfinite(d)) throw ParseError(name(k), "not finite");
        return d;
    }

    std::optional<double> opt_num(const std::string& k)
    {
        if (!has(k)) return std::nullopt;
        return num(k);
    }

    int integer(const std::string& k)
    {
        const json& v = raw(k);
        if (!v.is_number_integer()) throw ParseError(name(k), "expected an integer");
        return v.get<int>();
    }

    std::string str(const std::string& k)
    {
        const json& v = raw(k);
        if (!v.is_string()) throw ParseError(name(k), "expected a string");
        return v.get<std::string>();
    }

    std::string name(const std::string& k) const { return path_.empty() ? k : path_ + "." + k; }

    void finish() const
    {
        for (const auto& [k, v] : j_.items())
            if (!used_.count(k)) throw ParseError(name(k), "unknown field");
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> used_;
};

MassGeometry parse_geometry(const json& j, const std::string& path)
{
    Fields g(j, path);
    std::string shape = g.str("shape");
    MassGeometry out;
    if (shape == "point")
        out = PointMass{g.num("mass_kg")};
    else if (shape == "sphere")
        out = Sphere{g.num("mass_kg"), g.num("radius_m")};
    else if (shape == "cuboid")
        out = Cuboid{g.num("mass_kg"), g.num("a_m"), g.num("b_m"), g.num("c_m")};
    else if (shape == "disc")
        out = Disc{g.num("mass_kg"), g.num("radius_m"), g.num("thickness_m")};
    else
        throw ParseError(g.name("shape"), "unknown shape '" + shape + "'");
    g.finish();
    return out;
}

json geometry_json(const MassGeometry& g)
{
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, PointMass>)
                return {{"shape", "point"}, {"mass_kg", v.mass}};
            else if constexpr (std::is_same_v<T, Sphere>)
                return {{"shape", "sphere"}, {"mass_kg", v.mass}, {"radius_m", v.radius}};
            else if constexpr (std::is_same_v<T, Cuboid>)
                return {{"shape", "cuboid"}, {"mass_kg", v.mass}, {"a_m", v.a}, {"b_m", v.b}, {"c_m", v.c}};
            else
                return {{"shape", "disc"}, {"mass_kg", v.mass}, {"radius_m", v.radius}, {"thickness_m", v.thickness}};
        },
        g);
}

SuperconductorMaterial parse_material(const json& j, const std::string& path)
{
    if (j.is_string()) {
        auto s = j.get<std::string>();
        if (s == "niobium") return SuperconductorMaterial::niobium();
        if (s == "aluminium") return SuperconductorMaterial::aluminium();
        throw ParseError(path, "unknown material '" + s + "'");
    }
    Fields m(j, path);
    SuperconductorMaterial out{m.num("k_F_per_m"), m.num("gap_J"), m.num("debye_J")};
    m.finish();
    return out;
}

ExperimentRecord parse_record(const std::string& cls, Fields& p, Fields* obs)
{
    auto need_obs = [&]() -> Fields& {
        if (!obs) throw ParseError("observed", "missing");
        return *obs;
    };
    if (cls == "PointInterference") {
        PointInterference r{p.num("mass_kg"), p.num("t_s"), 0.0, p.opt_num("dx_m")};
        r.f = need_obs().num("f");
        return r;
    }
    if (cls == "GratingDiffraction") {
        GratingDiffraction r{parse_geometry(p.raw("geometry"), p.name("geometry")),
                             p.num("L1_m"),
                             p.num("L2_m"),
                             p.integer("slits"),
                             p.num("period_m"),
                             p.num("open_fraction"),
                             p.num("source_width_m"),
                             p.num("detector_width_m"),
                             p.num("velocity_m_per_s"),
                             p.num("velocity_fwhm_m_per_s"),
                             0.0};
        r.f = need_obs().num("f");
        return r;
    }
    if (cls == "TalbotLau") {
        TalbotLau r{parse_geometry(p.raw("geometry"), p.name("geometry")), p.num("T_s"), p.num("period_m"), 0.0};
        r.f = need_obs().num("f");
        return r;
    }
    if (cls == "Micromirror") {
        Micromirror r{p.num("edge_m"),  p.num("density_kg_per_m3"), p.num("omega_rad_per_s"),
                      p.num("x0_m"),    p.num("kappa"),             0.0};
        r.f = need_obs().num("f");
        return r;
    }
    if (cls == "Membrane") {
        Membrane r{p.num("radius_m"),        p.num("thickness_m"), p.num("density_kg_per_m3"),
                   p.num("omega_rad_per_s"), p.num("cycles"),      0.0};
        r.f = need_obs().num("f");
        return r;
    }
    if (cls == "Squid") {
        Squid r{parse_material(p.raw("material"), p.name("material")), p.num("length_m"), p.num("cross_section_m2"),
                0.0};
        if (auto i = p.opt_num("current_difference_A")) r.current_difference = *i;
        r.T2 = need_obs().num("T2_s");
        return r;
    }
    if (cls == "GasHeating") {
        GasHeating r{p.num("mass_kg"), need_obs().num("dEdt_J_per_s")};
        return r;
    }
    if (cls == "CatSuperposition") {
        CatSuperposition r{p.num("mass_kg"), 1000.0, p.num("dx_m"), p.num("t_s")};
        if (auto d = p.opt_num("density_kg_per_m3")) r.density = *d;
        return r;
    }
    throw ParseError("class", "unknown class '" + cls + "'");
}

}  // namespace

const std::vector<CatalogEntry>& builtin_catalog()
{
    static const std::vector<CatalogEntry> c = make_catalog();
    return c;
}

const CatalogEntry* find_entry(const std::string& id)
{
    for (const auto& e : builtin_catalog())
        if (e.id == id) return &e;
    return nullptr;
}

ExperimentRecord load_experiment(const std::string& json_text)
{
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError("document", e.what());
    }
    Fields top(doc, "");
    std::string cls = top.str("class");
    Fields params(top.raw("params"), "params");
    std::optional<Fields> obs;
    if (top.has("observed")) obs.emplace(top.raw("observed"), "observed");
    ExperimentRecord rec = parse_record(cls, params, obs ? &*obs : nullptr);
    params.finish();
    if (obs) obs->finish();
    top.finish();
    try {
        validate_record(rec);
    } catch (const DomainError& e) {
        throw ValidationError(e.what());
    }
    return rec;
}

std::string serialize_experiment(const ExperimentRecord& rec)
{
    json doc;
    doc["class"] = class_name(rec);
    json& p = doc["params"];
    p = json::object();
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, PointInterference>) {
                p["mass_kg"] = v.mass;
                p["t_s"] = v.t;
                if (v.dx) p["dx_m"] = *v.dx;
                doc["observed"] = {{"f", v.f}};
            } else if constexpr (std::is_same_v<T, GratingDiffraction>) {
                p = {{"geometry", geometry_json(v.geometry)},
                     {"L1_m", v.L1},
                     {"L2_m", v.L2},
                     {"slits", v.slits},
                     {"period_m", v.period},
                     {"open_fraction", v.open_fraction},
                     {"source_width_m", v.source_width},
                     {"detector_width_m", v.detector_width},
                     {"velocity_m_per_s", v.velocity},
                     {"velocity_fwhm_m_per_s", v.velocity_fwhm}};
                doc["observed"] = {{"f", v.f}};
            } else if constexpr (std::is_same_v<T, TalbotLau>) {
                p = {{"geometry", geometry_json(v.geometry)}, {"T_s", v.T}, {"period_m", v.period}};
                doc["observed"] = {{"f", v.f}};
            } else if constexpr (std::is_same_v<T, Micromirror>) {
                p = {{"edge_m", v.edge},
                     {"density_kg_per_m3", v.density},
                     {"omega_rad_per_s", v.omega},
                     {"x0_m", v.x0},
                     {"kappa", v.kappa}};
                doc["observed"] = {{"f", v.f}};
            } else if constexpr (std::is_same_v<T, Membrane>) {
                p = {{"radius_m", v.radius},
                     {"thickness_m", v.thickness},
                     {"density_kg_per_m3", v.density},
                     {"omega_rad_per_s", v.omega},
                     {"cycles", v.cycles}};
                doc["observed"] = {{"f", v.f}};
            } else if constexpr (std::is_same_v<T, Squid>) {
                p = {{"material",
                      {{"k_F_per_m", v.material.k_F}, {"gap_J", v.material.gap}, {"debye_J", v.material.debye}}},
                     {"length_m", v.length},
                     {"cross_section_m2", v.cross_section},
                     {"current_difference_A", v.current_difference}};
                doc["observed"] = {{"T2_s", v.T2}};
            } else if constexpr (std::is_same_v<T, GasHeating>) {
                p["mass_kg"] = v.mass;
                doc["observed"] = {{"dEdt_J_per_s", v.dEdt}};
            } else {
                p = {{"mass_kg", v.mass}, {"density_kg_per_m3", v.density}, {"dx_m", v.dx}, {"t_s", v.t}};
            }
        },
        rec);
    return doc.dump(2);
}

}  // namespace macro
