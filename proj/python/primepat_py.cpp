#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "primepat/census.hpp"
#include "primepat/wheel.hpp"

namespace py = pybind11;
using namespace primepat;

// Python ints <-> 128-bit integers, through their decimal text.
namespace pybind11::detail {
template <>
struct type_caster<unsigned __int128> {
    PYBIND11_TYPE_CASTER(unsigned __int128, const_name("int"));

    bool load(handle src, bool) {
        if (!PyLong_Check(src.ptr())) return false;
        const std::string text = py::str(src).cast<std::string>();
        if (!text.empty() && text[0] == '-') throw py::value_error("expected a non-negative integer");
        try {
            value = parse_wide(text);
        } catch (const std::exception&) {
            throw py::value_error("integer does not fit in 127 bits: " + text);
        }
        return true;
    }

    static handle cast(unsigned __int128 v, return_value_policy, handle) {
        return PyLong_FromString(to_string(v).c_str(), nullptr, 10);
    }
};
}  // namespace pybind11::detail

namespace {

SieveBoundRule bound_rule_of(const Pattern& p, std::optional<std::uint64_t> sieve_bound,
                             std::optional<double> space_exp, bool sqrt_bound) {
    if (sieve_bound) return ExplicitBound{*sieve_bound};
    if (space_exp) return SpaceExponent{*space_exp};
    if (sqrt_bound) return SqrtBound{};
    return default_bound_rule(p.size());
}

py::dict result_dict(const SearchResult& r) {
    py::dict d;
    d["hits"] = r.hits;
    d["count"] = r.count;
    d["sum"] = static_cast<double>(r.reciprocal_sum.value());
    d["wheel_modulus"] = r.wheel_modulus;
    d["sieve_bound"] = r.plan.bound;
    d["residues"] = r.stats.residues_total;
    d["interrupted"] = r.interrupted;
    return d;
}

}  // namespace

PYBIND11_MODULE(primepat, m) {
    m.doc() = "Prime pattern search: wheel + progression sieve + pseudosquare prime test";

    py::register_exception<CapacityError>(m, "CapacityError");
    py::register_exception<CheckpointError>(m, "CheckpointError");
    py::register_exception<PatternError>(m, "PatternError", PyExc_ValueError);

    py::class_<Pattern>(m, "Pattern")
        .def(py::init([](const std::string& text) { return parse_pattern(text); }), py::arg("text"))
        .def("__str__", &Pattern::to_string)
        .def("__repr__", [](const Pattern& p) { return "Pattern('" + p.to_string() + "')"; })
        .def("__len__", &Pattern::size)
        .def("__eq__", [](const Pattern& a, const Pattern& b) { return a == b; })
        .def_property_readonly("forms",
                               [](const Pattern& p) {
                                   py::list out;
                                   for (const LinearForm& f : p.forms()) {
                                       const std::string b = to_string(f.b);
                                       out.append(py::make_tuple(f.a, py::int_(py::str(b))));
                                   }
                                   return out;
                               })
        .def("admissible", &Pattern::admissible)
        .def("acceptable_residues", [](const Pattern& p, std::uint64_t q) { return p.acceptable_residues(q).residues(); },
             py::arg("p"))
        .def("values", [](const Pattern& p, WideInt x) {
            std::vector<WideInt> out;
            for (const LinearForm& f : p.forms()) out.push_back(static_cast<WideInt>(f.eval(x)));
            return out;
        });

    m.def("chain_pattern", [](const std::string& kind, unsigned length) { return chain_pattern(parse_chain_kind(kind), length); },
          py::arg("kind"), py::arg("length"));

    m.def("is_prime", [](WideInt n) { return is_prime(n); }, py::arg("n"));
    m.def("sprp_base2", &sprp_base2, py::arg("n"));
    m.def("pseudosquares", [](WideInt limit) {
        std::vector<std::pair<std::uint64_t, WideInt>> out;
        py::gil_scoped_release release;
        const PseudosquareTable table = compute_pseudosquares_fast(limit);
        for (const PseudosquareEntry& e : table.entries()) out.emplace_back(e.p, e.L);
        return out;
    }, py::arg("limit"));

    m.def("wheel", [](const Pattern& p, WideInt limit, std::vector<std::uint64_t> excluded) {
        const Wheel w = Wheel::build(p, limit, excluded);
        return py::make_tuple(w.modulus(), w.residue_count(), w.primes());
    }, py::arg("pattern"), py::arg("limit"), py::arg("excluded") = std::vector<std::uint64_t>{},
       "(W, residue count, wheel primes) for the greedy wheel under `limit`.");

    m.def(
        "search",
        [](const Pattern& p, WideInt n, std::uint64_t workers, std::optional<std::uint64_t> sieve_bound,
           std::optional<double> space_exp, bool sqrt_bound, std::optional<WideInt> wheel_limit,
           std::vector<std::uint64_t> excluded, std::optional<std::filesystem::path> checkpoint) {
            SearchConfig cfg = SearchConfig::defaults(p, n);
            cfg.bound_rule = bound_rule_of(p, sieve_bound, space_exp, sqrt_bound);
            cfg.workers = workers;
            cfg.wheel_limit = wheel_limit;
            cfg.excluded_wheel_primes = std::move(excluded);
            cfg.checkpoint_path = std::move(checkpoint);
            SearchResult r;
            {
                py::gil_scoped_release release;
                r = find_pattern_primes(cfg);
            }
            return result_dict(r);
        },
        py::arg("pattern"), py::arg("n"), py::kw_only(), py::arg("workers") = 1, py::arg("sieve_bound") = py::none(),
        py::arg("space_exp") = py::none(), py::arg("sqrt_bound") = false, py::arg("wheel_limit") = py::none(),
        py::arg("excluded") = std::vector<std::uint64_t>{}, py::arg("checkpoint") = py::none(),
        "Every x >= 1 with all forms prime and the largest at most n.");

    auto census = [](TupleCensus (*fn)(WideInt, const CensusOptions&)) {
        return [fn](WideInt X, std::uint64_t workers) {
            CensusOptions opts;
            opts.workers = workers;
            TupleCensus c;
            {
                py::gil_scoped_release release;
                c = fn(X, opts);
            }
            return py::make_tuple(c.count, static_cast<double>(c.recip_sum.value()));
        };
    };
    m.def("twins", census(&twins), py::arg("X"), py::arg("workers") = 1,
          "(count, reciprocal sum) over twin pairs (p, p+2) with p < X.");
    m.def("quads", census(&quads), py::arg("X"), py::arg("workers") = 1,
          "(count, reciprocal sum) over quadruplets with largest member < X.");

    m.def("smallest_chain", [](const std::string& kind, unsigned length, WideInt cap) {
        py::gil_scoped_release release;
        return smallest_chain(parse_chain_kind(kind), length, cap);
    }, py::arg("kind"), py::arg("length"), py::arg("cap"));
    m.def("chain_search", [](const std::string& kind, unsigned length, WideInt cap) {
        std::vector<ChainStart> starts;
        {
            py::gil_scoped_release release;
            starts = chain_search(parse_chain_kind(kind), length, cap);
        }
        py::list out;
        for (const ChainStart& c : starts) out.append(py::make_tuple(c.x, c.length, c.complete));
        return out;
    }, py::arg("kind"), py::arg("length"), py::arg("cap"));
}
