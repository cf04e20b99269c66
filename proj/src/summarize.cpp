// SPDX-License-Identifier: Apache-2.0
#include "hadbf/summarize.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "hadbf/core.hpp"
#include "hadbf/experiments.hpp"
#include "hadbf/io.hpp"

namespace hadbf
{

using nlohmann::json;
namespace fs = std::filesystem;

namespace
{

struct Table
{
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string &name) const
    {
        const auto it = std::find(header.begin(), header.end(), name);
        return it == header.end() ? -1 : static_cast<int>(it - header.begin());
    }
};

std::vector<std::string> split(const std::string &line)
{
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ','))
        out.push_back(cell);
    return out;
}

std::optional<Table> read_csv(const fs::path &p)
{
    std::ifstream in(p);
    if (!in)
        return std::nullopt;
    Table t;
    std::string line;
    if (!std::getline(in, line))
        return std::nullopt;
    t.header = split(line);
    while (std::getline(in, line))
        if (!line.empty())
            t.rows.push_back(split(line));
    return t;
}

double num(const std::string &s) { return std::stod(s); }

struct Curve
{
    std::vector<double> x, mean;

    std::optional<double> at(double v) const
    {
        for (std::size_t i = 0; i < x.size(); ++i)
            if (std::abs(x[i] - v) < 1e-9)
                return mean[i];
        return std::nullopt;
    }
};

class FigureData
{
public:
    FigureData(fs::path dir, json manifest) : dir_(std::move(dir)), manifest_(std::move(manifest)) {}

    std::string id() const { return manifest_.value("figure", std::string("?")); }
    int n_trials() const { return manifest_.value("n_trials", 0); }

    std::optional<Curve> curve(const std::string &name)
    {
        auto t = read_csv(dir_ / (id() + "_" + name + ".csv"));
        if (!t)
        {
            missing.push_back(id() + "_" + name + ".csv");
            return std::nullopt;
        }
        const int cx = t->column("x_value"), cm = t->column("mean_metric");
        if (cx < 0 || cm < 0)
        {
            missing.push_back(id() + "_" + name + ".csv (bad header)");
            return std::nullopt;
        }
        Curve c;
        for (const auto &r : t->rows)
        {
            c.x.push_back(num(r.at(cx)));
            c.mean.push_back(num(r.at(cm)));
        }
        return c;
    }

    std::optional<Table> table(const std::string &name)
    {
        auto t = read_csv(dir_ / (id() + "_" + name + ".csv"));
        if (!t)
            missing.push_back(id() + "_" + name + ".csv");
        return t;
    }

    void check_declared()
    {
        if (!manifest_.contains("files"))
            return;
        for (const auto &f : manifest_.at("files"))
        {
            const fs::path p = dir_ / f.at("name").get<std::string>();
            if (!fs::exists(p))
                missing.push_back(p.filename().string());
            else if (file_hash(p) != f.at("fnv1a64").get<std::string>())
                tampered.push_back(p.filename().string());
        }
    }

    int n_declared_curves() const { return manifest_.contains("curves") ? static_cast<int>(manifest_["curves"].size()) : 0; }

    std::vector<std::string> missing;
    std::vector<std::string> tampered;

private:
    fs::path dir_;
    json manifest_;
};

std::string fmt(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

Check make(const std::string &id, const std::string &fig, const std::string &desc, bool acceptance)
{
    Check c;
    c.id = id;
    c.figure = fig;
    c.description = desc;
    c.acceptance = acceptance;
    return c;
}

void settle(Check &c, bool pass, std::string detail)
{
    c.status = pass ? Check::Status::kPass : Check::Status::kFail;
    c.detail = std::move(detail);
}

void sinr_ordering(FigureData &f, std::vector<Check> &out)
{
    Check c = make("sinr_ordering", f.id(), "mean SINR at SNR_d = 10 dB: iba_apals >= smf_apals >= dl >= scb, and "
                                            "scb at least 5 dB below iba_apals",
                   true);
    auto iba = f.curve("iba_apals"), smf = f.curve("smf_apals"), dl = f.curve("dl"), scb = f.curve("scb");
    if (iba && smf && dl && scb && iba->at(10) && smf->at(10) && dl->at(10) && scb->at(10))
    {
        const double a = *iba->at(10), b = *smf->at(10), d = *dl->at(10), s = *scb->at(10);
        settle(c, a >= b && b >= d && d >= s && a - s >= 5.0,
               "iba_apals " + fmt(a) + ", smf_apals " + fmt(b) + ", dl " + fmt(d) + ", scb " + fmt(s));
    }
    out.push_back(c);
}

void snapshot_sensitivity(FigureData &f, std::vector<Check> &out)
{
    Check c = make("snapshot_sensitivity", f.id(),
                   "SNR_d = 0 dB, Q 32 -> 128: scb and dl improve, iba_apals moves by < 1 dB", true);
    auto s32 = f.curve("scb_q32"), s128 = f.curve("scb_q128"), d32 = f.curve("dl_q32"), d128 = f.curve("dl_q128"),
         i32 = f.curve("iba_apals_q32"), i128 = f.curve("iba_apals_q128");
    if (s32 && s128 && d32 && d128 && i32 && i128 && s32->at(0) && s128->at(0) && d32->at(0) && d128->at(0) &&
        i32->at(0) && i128->at(0))
    {
        const double ds = *s128->at(0) - *s32->at(0), dd = *d128->at(0) - *d32->at(0),
                     di = *i128->at(0) - *i32->at(0);
        settle(c, ds > 0 && dd > 0 && std::abs(di) < 1.0,
               "scb +" + fmt(ds) + " dB, dl +" + fmt(dd) + " dB, iba_apals " + fmt(di) + " dB");
    }
    out.push_back(c);
}

void mismatch(FigureData &f, std::vector<Check> &out)
{
    Check c = make("mismatch_loss", f.id(), "SNR_d = 10 dB: iba_apals loses less SINR to DOA mismatch than dl", true);
    auto i = f.curve("iba_apals"), i0 = f.curve("iba_apals_matched"), d = f.curve("dl"), d0 = f.curve("dl_matched");
    if (i && i0 && d && d0 && i->at(10) && i0->at(10) && d->at(10) && d0->at(10))
    {
        const double li = *i0->at(10) - *i->at(10), ld = *d0->at(10) - *d->at(10);
        settle(c, li < ld, "iba_apals loss " + fmt(li) + " dB, dl loss " + fmt(ld) + " dB");
    }
    out.push_back(c);

    Check o = make("mismatch_ordering", f.id(), "iba_apals >= smf_apals >= dl at every SNR_d >= 0", false);
    auto smf = f.curve("smf_apals");
    if (i && smf && d)
    {
        bool ok = true;
        std::string worst;
        for (std::size_t k = 0; k < i->x.size(); ++k)
        {
            if (i->x[k] < 0)
                continue;
            const auto b = smf->at(i->x[k]), e = d->at(i->x[k]);
            if (!b || !e)
                continue;
            if (!(i->mean[k] >= *b && *b >= *e))
            {
                ok = false;
                worst += " at " + fmt(i->x[k]) + " dB: " + fmt(i->mean[k]) + "/" + fmt(*b) + "/" + fmt(*e);
            }
        }
        settle(o, ok, ok ? "holds" : "violated" + worst);
    }
    out.push_back(o);
}

void nulls(FigureData &f, std::vector<Check> &out)
{
    const bool t3 = f.id() == "table3";
    auto trials = f.table("trials");
    Check closed = make("closed_form_null", f.id(), "dl_apals and smf_apals reach <= -34 dB at -30 deg in every trial",
                        true);
    Check iba = make("iba_nulls", f.id(), "iba_apals reaches <= -30 dB at -30 and 60 deg in >= 80% of trials", true);
    Check dl = make("dl_null", f.id(), "fully digital dl mean depth at -30 deg within -26.26 +/- 4 dB", true);
    if (trials)
    {
        const int cm = trials->column("method"), c30 = trials->column("null_m30_tabulated_db"),
                  c60 = trials->column("null_60_tabulated_db");
        std::map<std::string, std::vector<std::pair<double, double>>> by;
        for (const auto &r : trials->rows)
            by[r.at(cm)].push_back({num(r.at(c30)), num(r.at(c60))});
        if (by.count("dl_apals") && by.count("smf_apals"))
        {
            double worst = -1e300;
            for (const char *m : {"dl_apals", "smf_apals"})
                for (auto [a, b] : by[m])
                    worst = std::max(worst, a);
            settle(closed, worst <= -34.0, "worst -30 deg depth " + fmt(worst) + " dB");
        }
        if (by.count("iba_apals"))
        {
            const auto &v = by["iba_apals"];
            int ok = 0;
            for (auto [a, b] : v)
                ok += a <= -30.0 && b <= -30.0;
            const double frac = static_cast<double>(ok) / v.size();
            settle(iba, frac >= 0.8, std::to_string(ok) + "/" + std::to_string(v.size()) + " trials");
        }
        if (t3 && by.count("dl"))
        {
            double m = 0;
            for (auto [a, b] : by["dl"])
                m += a / by["dl"].size();
            settle(dl, std::abs(m - (-26.26)) <= 4.0, "mean " + fmt(m) + " dB");
        }
    }
    out.push_back(closed);
    out.push_back(iba);
    if (t3)
        out.push_back(dl);
}

void convergence(FigureData &f, std::vector<Check> &out)
{
    for (char panel : {'a', 'b', 'c', 'd'})
    {
        const std::string p(1, panel);
        auto t = f.table(p + "_final_cf");
        const bool acceptance = panel == 'b';
        Check c = make("convergence_" + p, f.id(),
                       "panel " + p + ": iba final CF below ba and below pso in >= 70% of trials", acceptance);
        if (t)
        {
            const int ci = t->column("iba"), cb = t->column("ba"), cp = t->column("pso");
            int wb = 0, wp = 0;
            for (const auto &r : t->rows)
            {
                wb += num(r.at(ci)) < num(r.at(cb));
                wp += num(r.at(ci)) < num(r.at(cp));
            }
            const double n = static_cast<double>(t->rows.size());
            settle(c, n > 0 && wb / n >= 0.7 && wp / n >= 0.7,
                   "iba < ba in " + fmt(wb / n) + ", iba < pso in " + fmt(wp / n));
        }
        out.push_back(c);

        Check mono = make("trace_monotone_" + p, f.id(), "panel " + p + ": mean cost traces are non-increasing",
                          acceptance);
        bool any = false, ok = true;
        for (const char *alg : {"iba", "ba", "pso"})
            if (auto cv = f.curve(p + "_" + alg))
            {
                any = true;
                for (std::size_t k = 1; k < cv->mean.size(); ++k)
                    ok = ok && cv->mean[k] <= cv->mean[k - 1];
            }
        if (any)
            settle(mono, ok, ok ? "non-increasing" : "increase found");
        out.push_back(mono);
    }
}

const char *status_name(Check::Status s)
{
    switch (s)
    {
    case Check::Status::kPass:
        return "pass";
    case Check::Status::kFail:
        return "fail";
    default:
        return "skipped";
    }
}

std::string table_deltas(FigureData &f)
{
    auto t = f.table("summary");
    if (!t)
        return {};
    std::string md = "\n| method | -30 deg | 60 deg | reference -30 | reference 60 | delta -30 | delta 60 |\n"
                     "|---|---|---|---|---|---|---|\n";
    const int c[] = {t->column("method"),          t->column("mean_m30_db"),  t->column("mean_60_db"),
                     t->column("reference_m30_db"), t->column("reference_60_db"), t->column("delta_m30_db"),
                     t->column("delta_60_db")};
    for (const auto &r : t->rows)
    {
        md += "| " + r.at(c[0]);
        for (int k = 1; k < 7; ++k)
            md += " | " + fmt(num(r.at(c[k])));
        md += " |\n";
    }
    return md;
}

} // namespace

bool SummaryReport::acceptance_failed() const
{
    return std::any_of(checks.begin(), checks.end(),
                       [](const Check &c) { return c.acceptance && c.status == Check::Status::kFail; });
}

SummaryReport summarize_directory(const fs::path &dir)
{
    if (!fs::is_directory(dir))
        throw std::runtime_error("not a directory: " + dir.string());
    std::vector<fs::path> manifests;
    auto scan = [&](const fs::path &d) {
        for (const auto &e : fs::directory_iterator(d))
        {
            const std::string n = e.path().filename().string();
            if (e.is_regular_file() && n.size() > 14 && n.substr(n.size() - 14) == "_manifest.json")
                manifests.push_back(e.path());
        }
    };
    scan(dir);
    for (const auto &e : fs::directory_iterator(dir))
        if (e.is_directory())
            scan(e.path());
    std::sort(manifests.begin(), manifests.end());

    SummaryReport rep;
    std::string sections;
    for (const auto &mp : manifests)
    {
        std::ifstream in(mp);
        json m;
        try
        {
            in >> m;
        }
        catch (const json::parse_error &)
        {
            rep.missing.push_back(mp.filename().string() + " (unreadable)");
            continue;
        }
        FigureData f(mp.parent_path(), m);
        f.check_declared();
        rep.figures.push_back(f.id());
        rep.n_curves += f.n_declared_curves();

        std::vector<Check> checks;
        const std::string id = f.id();
        if (id == "fig2")
            sinr_ordering(f, checks);
        else if (id == "fig3" || id == "fig4")
            snapshot_sensitivity(f, checks);
        else if (id == "fig9")
            mismatch(f, checks);
        else if (id == "table2" || id == "table3")
        {
            nulls(f, checks);
            sections += "\n### " + id + " null depths (tabulated scale)\n" + table_deltas(f);
        }
        else if (id == "fig7")
            convergence(f, checks);

        for (const auto &t : f.tampered)
        {
            Check c = make("file_hash", id, "manifest hash matches " + t, true);
            settle(c, false, "hash mismatch");
            checks.push_back(c);
        }
        for (auto &c : checks)
            rep.checks.push_back(c);
        for (auto &x : f.missing)
            rep.missing.push_back(x);
    }
    for (const auto &id : figure_ids())
        if (std::find(rep.figures.begin(), rep.figures.end(), id) == rep.figures.end())
            rep.missing.push_back(id + "_manifest.json");
    rep.complete = !manifests.empty() && rep.missing.empty() &&
                   std::none_of(rep.checks.begin(), rep.checks.end(),
                                [](const Check &c) { return c.status == Check::Status::kSkipped; });

    json j;
    j["status"] = rep.complete ? "complete" : "incomplete";
    j["n_curves"] = rep.n_curves;
    j["figures"] = rep.figures;
    j["missing"] = rep.missing;
    json cj = json::array();
    for (const auto &c : rep.checks)
        cj.push_back({{"id", c.id},
                      {"figure", c.figure},
                      {"description", c.description},
                      {"status", status_name(c.status)},
                      {"acceptance", c.acceptance},
                      {"detail", c.detail}});
    j["checks"] = cj;
    j["acceptance_failed"] = rep.acceptance_failed();
    rep.json = j;

    std::string md = "# Results summary\n\nStatus: " + std::string(rep.complete ? "complete" : "incomplete") +
                     "\n\nFigures: " + std::to_string(rep.figures.size()) +
                     ", curves: " + std::to_string(rep.n_curves) + "\n";
    if (!rep.checks.empty())
    {
        md += "\n| figure | check | status | detail |\n|---|---|---|---|\n";
        for (const auto &c : rep.checks)
            md += "| " + c.figure + " | " + c.description + (c.acceptance ? "" : " (informational)") + " | " +
                  status_name(c.status) + " | " + c.detail + " |\n";
    }
    md += sections;
    if (!rep.missing.empty())
    {
        md += "\nMissing inputs:\n";
        for (const auto &x : rep.missing)
            md += "- " + x + "\n";
    }
    rep.markdown = md;
    return rep;
}

void write_report(const fs::path &dir, const SummaryReport &report)
{
    write_text_file(dir / "report.md", report.markdown);
    write_text_file(dir / "report.json", report.json.dump(2) + "\n");
}

} // namespace hadbf
