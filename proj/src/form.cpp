#include "hamsec/form.hpp"

#include <algorithm>

namespace hamsec {

namespace {

// Sort a key in place; returns the permutation sign, or 0 on a repeated index.
int normalize_key(FormJet::Key& key) {
    int sign = 1;
    for (size_t i = 1; i < key.size(); ++i)
        for (size_t j = i; j > 0 && key[j - 1] >= key[j]; --j) {
            if (key[j - 1] == key[j]) return 0;
            std::swap(key[j - 1], key[j]);
            sign = -sign;
        }
    return sign;
}

}  // namespace

Jet FormJet::comp(Key key) const {
    if (int(key.size()) != degree_) throw error("FormJet::comp: key length mismatch");
    int sign = normalize_key(key);
    if (sign == 0) return Jet::zero(chart_, order_);
    auto it = comps_.find(key);
    if (it == comps_.end()) return Jet::zero(chart_, order_);
    return sign == 1 ? it->second : -it->second;
}

void FormJet::add_comp(Key key, const Jet& a) {
    if (int(key.size()) != degree_) throw error("FormJet::add_comp: key length mismatch");
    if (a.chart() != chart_) throw error("FormJet::add_comp: chart mismatch");
    for (int v : key)
        if (v < 0 || v >= chart_.dim()) throw error("FormJet::add_comp: bad variable index");
    int sign = normalize_key(key);
    if (sign == 0 || a.is_zero()) return;
    if (a.order() < order_) *this = truncated(a.order());
    Jet add = (sign == 1 ? a : -a).truncated(order_);
    if (add.is_zero()) return;
    auto it = comps_.find(key);
    if (it == comps_.end()) {
        comps_.emplace(std::move(key), std::move(add));
    } else {
        it->second += add;
        if (it->second.is_zero()) comps_.erase(it);
    }
}

FormJet FormJet::truncated(int new_order) const {
    if (new_order >= order_) return *this;
    FormJet r(chart_, degree_, new_order);
    for (auto& [k, j] : comps_) {
        Jet t = j.truncated(new_order);
        if (!t.is_zero()) r.comps_[k] = std::move(t);
    }
    return r;
}

FormJet FormJet::operator-() const {
    FormJet r(chart_, degree_, order_);
    for (auto& [k, j] : comps_) r.comps_[k] = -j;
    return r;
}

FormJet& FormJet::operator+=(const FormJet& o) {
    if (chart_ != o.chart_ || degree_ != o.degree_)
        throw error("FormJet: chart/degree mismatch in addition");
    if (o.order_ < order_) *this = truncated(o.order_);
    for (auto& [k, j] : o.comps_) add_comp(k, j.truncated(order_));
    return *this;
}

FormJet& FormJet::operator-=(const FormJet& o) { return *this += -o; }

FormJet operator*(const Rat& s, const FormJet& a) {
    FormJet r(a.chart_, a.degree_, a.order_);
    if (s == 0) return r;
    for (auto& [k, j] : a.comps_) r.comps_[k] = s * j;
    return r;
}

FormJet operator*(const Jet& s, const FormJet& a) {
    int ord = std::min(s.order(), a.order_);
    FormJet r(a.chart_, a.degree_, ord);
    for (auto& [k, j] : a.comps_) r.add_comp(k, s * j);
    return r;
}

std::string FormJet::str() const {
    if (comps_.empty()) return "0";
    std::string out;
    for (auto& [k, j] : comps_) {
        if (!out.empty()) out += " + ";
        out += "(" + j.str() + ")";
        for (int v : k) out += " d" + chart_.var_name(v);
    }
    return out;
}

FormJet d(const FormJet& a) {
    if (a.degree() >= 3) throw error("d: degree overflow");
    FormJet r(a.chart(), a.degree() + 1, std::max(0, a.order() - 1));
    for (auto& [key, j] : a.comps())
        for (int v = 0; v < a.chart().dim(); ++v) {
            Jet pj = partial(j, v);
            if (pj.is_zero()) continue;
            FormJet::Key nk = key;
            nk.insert(nk.begin(), v);
            r.add_comp(std::move(nk), pj);
        }
    return r;
}

FormJet wedge(const FormJet& a, const FormJet& b) {
    if (a.chart() != b.chart()) throw error("wedge: chart mismatch");
    if (a.degree() + b.degree() > 3) throw error("wedge: degree overflow");
    FormJet r(a.chart(), a.degree() + b.degree(), std::min(a.order(), b.order()));
    for (auto& [ka, ja] : a.comps())
        for (auto& [kb, jb] : b.comps()) {
            FormJet::Key k = ka;
            k.insert(k.end(), kb.begin(), kb.end());
            r.add_comp(std::move(k), ja * jb);
        }
    return r;
}

FormJet interior(const std::vector<Jet>& V, const FormJet& a) {
    if (int(V.size()) != a.chart().dim()) throw error("interior: field arity mismatch");
    if (a.degree() == 0) throw error("interior: degree 0 form");
    int ord = a.order();
    for (auto& c : V) {
        if (c.chart() != a.chart()) throw error("interior: chart mismatch");
        ord = std::min(ord, c.order());
    }
    FormJet r(a.chart(), a.degree() - 1, ord);
    for (auto& [key, j] : a.comps())
        for (size_t pos = 0; pos < key.size(); ++pos) {
            const Jet& vi = V[size_t(key[pos])];
            if (vi.is_zero()) continue;
            FormJet::Key k;
            for (size_t t = 0; t < key.size(); ++t)
                if (t != pos) k.push_back(key[t]);
            Jet c = vi * j;
            r.add_comp(std::move(k), pos % 2 == 0 ? c : -c);
        }
    return r;
}

FormJet pullback(const DiffeoJet& phi, const FormJet& a) {
    if (phi.chart() != a.chart()) throw error("pullback: chart mismatch");
    Chart chart = a.chart();
    int ord = a.degree() == 0 ? std::min(a.order(), phi.order())
                              : std::min(a.order(), phi.order() - 1);
    FormJet r(chart, a.degree(), std::max(0, ord));
    // differentials of the components, as 1-forms
    std::vector<FormJet> dphi;
    for (int i = 0; i < chart.dim(); ++i) {
        FormJet df(chart, 1, std::max(0, phi.order() - 1));
        for (int v = 0; v < chart.dim(); ++v) df.add_comp({v}, partial(phi.component(i), v));
        dphi.push_back(std::move(df));
    }
    for (auto& [key, j] : a.comps()) {
        Jet c = phi.apply(j);
        if (key.empty()) {
            r.add_comp({}, c);
            continue;
        }
        FormJet w = dphi[size_t(key[0])];
        for (size_t t = 1; t < key.size(); ++t) w = wedge(w, dphi[size_t(key[t])]);
        r += (c * w).truncated(r.order());
    }
    return r;
}

int rank_at_origin(const FormJet& a) {
    if (a.degree() != 2) throw error("rank_at_origin: need a 2-form");
    int dim = a.chart().dim();
    std::vector<std::vector<Rat>> M(size_t(dim), std::vector<Rat>(size_t(dim), 0));
    for (auto& [key, j] : a.comps()) {
        Rat c = j.eval0();
        M[size_t(key[0])][size_t(key[1])] = c;
        M[size_t(key[1])][size_t(key[0])] = -c;
    }
    // Gaussian elimination rank, inline to avoid the ratlin include cycle
    int rank = 0;
    size_t r = 0;
    for (size_t c = 0; c < size_t(dim) && r < size_t(dim); ++c) {
        size_t pr = r;
        while (pr < size_t(dim) && M[pr][c] == 0) ++pr;
        if (pr == size_t(dim)) continue;
        std::swap(M[pr], M[r]);
        for (size_t i = r + 1; i < size_t(dim); ++i) {
            if (M[i][c] == 0) continue;
            Rat f = M[i][c] / M[r][c];
            for (size_t jx = c; jx < size_t(dim); ++jx) M[i][jx] -= f * M[r][jx];
        }
        ++rank;
        ++r;
    }
    return rank;
}

bool is_closed(const FormJet& a) { return d(a).is_zero(); }

FormJet homotopy_primitive(const FormJet& a) {
    if (a.degree() < 1 || a.degree() > 2) throw error("homotopy_primitive: degree must be 1 or 2");
    if (!is_closed(a)) throw error("homotopy_primitive: form is not closed");
    int deg = a.degree();
    FormJet r(a.chart(), deg - 1, a.order() + 1);
    for (auto& [key, j] : a.comps())
        for (auto& [m, c] : j.coeffs()) {
            int k = m.deg();
            Rat scale = c / (k + deg);
            for (size_t pos = 0; pos < key.size(); ++pos) {
                Mono mm = m;
                mm[key[pos]] = uint8_t(mm[key[pos]] + 1);
                Jet coeff(a.chart(), a.order() + 1);
                coeff.set_coeff(mm, pos % 2 == 0 ? scale : -scale);
                FormJet::Key nk;
                for (size_t t = 0; t < key.size(); ++t)
                    if (t != pos) nk.push_back(key[t]);
                r.add_comp(std::move(nk), coeff);
            }
        }
    return r;
}

FormJet darboux_form(Chart chart, int order) {
    FormJet w = pq_form(chart, order);
    if (chart.has_x()) w.add_comp({chart.x_index(), chart.y_index()}, Jet::constant(chart, order, 1));
    return w;
}

FormJet pq_form(Chart chart, int order) {
    FormJet w(chart, 2, order);
    for (int i = 1; i <= chart.n; ++i)
        w.add_comp({chart.p_index(i), chart.q_index(i)}, Jet::constant(chart, order, 1));
    return w;
}

}  // namespace hamsec
