#include "macro/commands.hpp"

#include "macro/catalog.hpp"
#include "macro/errors.hpp"
#include "macro/oracle.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace macro {

using json = nlohmann::json;

namespace {

std::string sci(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9e", v);
    return buf;
}

std::string fixed(double v, int digits)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

// RFC 4180: quote fields containing separators, quotes or line breaks
std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

void emit(const CommandOptions& opt, std::ostream& out, const std::string& content)
{
    if (opt.out.empty())
        out << content;
    else
        write_atomic(opt.out, content);
}

std::string format_or(const CommandOptions& opt, const std::string& fallback)
{
    std::string f = opt.format.empty() ? fallback : opt.format;
    if (f != "json" && f != "csv") throw DomainError("--format must be json or csv");
    return f;
}

ParameterBounds pick_bounds(const CommandOptions& opt, const ExperimentRecord& rec)
{
    if (opt.bounds.empty()) return bounds_for(rec);
    if (opt.bounds == "default") return ParameterBounds::default_preset();
    if (opt.bounds == "squid") return ParameterBounds::squid_preset();
    throw DomainError("--bounds must be default or squid");
}

SearchSpec search_spec(const CommandOptions& opt)
{
    SearchSpec s;
    if (opt.grid_max) s.upper = *opt.grid_max;
    if (opt.grid_points) {
        if (*opt.grid_points < 2) throw DomainError("--grid-points must be at least 2");
        s.per_decade = *opt.grid_points;
    }
    return s;
}

// Maps the error families onto exit codes.
int guarded(std::ostream& err, const std::function<int()>& body)
{
    try {
        return body();
    } catch (const ConvergenceError& e) {
        err << "error: numerical non-convergence: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const ValidationError& e) {
        err << "error: invalid experiment: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}

}  // namespace

GridSpec curve_grid(const CommandOptions& opt)
{
    GridSpec g;
    if (opt.grid_min) g.min = *opt.grid_min;
    if (opt.grid_max) g.max = *opt.grid_max;
    if (opt.grid_points) g.points = *opt.grid_points;
    return g;
}

ExperimentRecord resolve_record(const CommandOptions& opt, std::string* id)
{
    if (!opt.id.empty() && !opt.input.empty()) throw ParseError("--id", "give either --id or --input");
    if (!opt.id.empty()) {
        const CatalogEntry* e = find_entry(opt.id);
        if (!e) throw ParseError("--id", "unknown catalog id '" + opt.id + "'");
        if (id) *id = e->id;
        return e->record;
    }
    if (opt.input.empty()) throw ParseError("--input", "an experiment is required (--id or --input)");
    std::ifstream in(opt.input);
    if (!in) throw ParseError("--input", "cannot read '" + opt.input + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    if (id) *id = std::filesystem::path(opt.input).stem().string();
    return load_experiment(ss.str());
}

void write_atomic(const std::string& path, const std::string& content)
{
    std::filesystem::path p(path);
    std::filesystem::path tmp = p;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot write '" + tmp.string() + "'");
        f << content;
        if (!f.flush()) throw std::runtime_error("write failed for '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, p);
}

std::string mu_report_json(const std::string& id, const ExperimentRecord& rec, const MacroscopicityReport& r)
{
    json j;
    j["id"] = id;
    j["class"] = class_name(rec);
    j["mu"] = r.mu;
    j["tau_max_s"] = r.tau_max;
    j["argmax_sigma_s_m"] = r.argmax_sigma_s;
    j["argmax_hbar_over_sigma_q_m"] = r.argmax_hbar_over_sigma_q;
    j["bounds"] = r.bounds_id;
    j["saturated"] = r.saturated;
    j["sigma_s_monotone"] = r.sigma_s_monotone;
    j["method"] = r.method;
    j["notes"] = r.notes;
    j["metadata"] = model_metadata(rec);
    if (const CatalogEntry* e = find_entry(id); e && e->record == rec) {
        j["published_mu"] = e->published_mu ? json(*e->published_mu) : json(nullptr);
        j["assumed"] = e->assumed;
    }
    return j.dump(2) + "\n";
}

std::string curve_csv(const ExclusionCurve& c)
{
    std::string s = "hbar_over_sigma_q_m,tau_excluded_s\n";
    for (const auto& p : c.points) s += sci(p.hbar_over_sigma_q) + "," + (p.tau_excluded ? sci(*p.tau_excluded) : "") + "\n";
    return s;
}

int cmd_mu(const CommandOptions& opt, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        std::string id;
        ExperimentRecord rec = resolve_record(opt, &id);
        std::string fmt = format_or(opt, "json");
        MacroscopicityReport r = macroscopicity(rec, pick_bounds(opt, rec), search_spec(opt));
        std::string doc;
        if (fmt == "json") {
            doc = mu_report_json(id, rec, r);
        } else {
            doc = "id,class,mu,tau_max_s,argmax_sigma_s_m,argmax_hbar_over_sigma_q_m,bounds,saturated\n";
            doc += csv_field(id) + "," + class_name(rec) + "," + fixed(r.mu, 4) + "," + sci(r.tau_max) + "," +
                   sci(r.argmax_sigma_s) + "," + sci(r.argmax_hbar_over_sigma_q) + "," + r.bounds_id + "," +
                   (r.saturated ? "true" : "false") + "\n";
        }
        emit(opt, out, doc);
        std::ostream& human = opt.out.empty() ? err : out;
        human << id << " (" << class_name(rec) << "): mu = " << fixed(r.mu, 2) << " at hbar/sigma_q = "
              << sci(r.argmax_hbar_over_sigma_q) << " m, sigma_s = " << sci(r.argmax_sigma_s) << " m ["
              << r.bounds_id << " bounds" << (r.saturated ? ", saturated" : "") << "]\n";
        return kExitOk;
    });
}

int cmd_curve(const CommandOptions& opt, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        std::string id;
        ExperimentRecord rec = resolve_record(opt, &id);
        std::string fmt = format_or(opt, "csv");
        double ss = opt.sigma_s ? *opt.sigma_s : pick_bounds(opt, rec).sigma_s_max;
        if (ss < 0.0) throw DomainError("--sigma-s must be non-negative");
        ExclusionCurve c = exclusion_curve(rec, ss, curve_grid(opt).values(), id);
        if (fmt == "csv") {
            emit(opt, out, curve_csv(c));
        } else {
            json j;
            j["id"] = id;
            j["sigma_s_m"] = c.sigma_s;
            j["metadata"] = c.metadata;
            j["points"] = json::array();
            for (const auto& p : c.points) {
                json row{{"hbar_over_sigma_q_m", p.hbar_over_sigma_q}};
                row["tau_excluded_s"] = p.tau_excluded ? json(*p.tau_excluded) : json(nullptr);
                if (!p.error.empty()) row["error"] = p.error;
                j["points"].push_back(row);
            }
            emit(opt, out, j.dump(2) + "\n");
        }
        if (c.has_gaps()) {
            for (const auto& p : c.points)
                if (!p.tau_excluded) err << "gap at hbar/sigma_q = " << sci(p.hbar_over_sigma_q) << ": " << p.error << "\n";
            return static_cast<int>(kExitNumerical);
        }
        return static_cast<int>(kExitOk);
    });
}

int cmd_timeline(const CommandOptions& opt, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        std::string fmt = format_or(opt, "csv");
        std::vector<const CatalogEntry*> picked;
        for (const auto& e : builtin_catalog()) {
            bool keep = opt.filter.empty() ? e.year.has_value()
                        : opt.filter == "all" ? true
                                              : class_name(e.record) == opt.filter ||
                                                    e.id.find(opt.filter) != std::string::npos;
            if (keep) picked.push_back(&e);
        }
        if (picked.empty()) throw DomainError("no catalog entry matches the filter '" + opt.filter + "'");

        int status = kExitOk;
        std::string csv = "id,year,mu_computed,mu_published,assumed\n";
        json arr = json::array();
        for (const CatalogEntry* e : picked) {
            MacroscopicityReport r = macroscopicity(e->record, bounds_for(e->record));
            std::string year = e->year ? std::to_string(*e->year) : "";
            std::string pub = e->published_mu ? fixed(*e->published_mu, 1) : "";
            csv += csv_field(e->id) + "," + year + "," + fixed(r.mu, 2) + "," + pub + "," +
                   (e->assumed ? "true" : "false") + "\n";
            json row{{"id", e->id}, {"mu_computed", r.mu}, {"assumed", e->assumed}};
            row["year"] = e->year ? json(*e->year) : json(nullptr);
            row["mu_published"] = e->published_mu ? json(*e->published_mu) : json(nullptr);
            arr.push_back(row);
            if (e->published_mu && std::abs(r.mu - *e->published_mu) > e->tolerance) {
                err << e->id << ": mu " << fixed(r.mu, 2) << " outside " << fixed(*e->published_mu, 1) << " +- "
                    << e->tolerance << "\n";
                status = kExitValidation;
            }
        }
        emit(opt, out, fmt == "csv" ? csv : arr.dump(2) + "\n");
        return status;
    });
}

int cmd_validate(const CommandOptions& opt, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        std::vector<OracleCheck> rows = run_oracle_suite(opt.seed);
        std::string fmt = format_or(opt, "csv");
        bool all = true;
        std::string doc;
        if (fmt == "csv") {
            doc = "check,analytic,oracle,std_error,tolerance,status\n";
            for (const auto& r : rows) {
                doc += csv_field(r.name) + "," + sci(r.analytic) + "," + sci(r.estimate) + "," + sci(r.std_error) +
                       "," + sci(r.tolerance) + "," + (r.pass ? "PASS" : "FAIL") + "\n";
                all = all && r.pass;
            }
        } else {
            json arr = json::array();
            for (const auto& r : rows) {
                arr.push_back({{"check", r.name},
                               {"analytic", r.analytic},
                               {"oracle", r.estimate},
                               {"std_error", r.std_error},
                               {"tolerance", r.tolerance},
                               {"pass", r.pass}});
                all = all && r.pass;
            }
            doc = json{{"seed", opt.seed}, {"checks", arr}}.dump(2) + "\n";
        }
        emit(opt, out, doc);
        err << (all ? "all oracle checks passed" : "oracle checks FAILED") << " (seed " << opt.seed << ")\n";
        return all ? static_cast<int>(kExitOk) : static_cast<int>(kExitValidation);
    });
}

}  // namespace macro
