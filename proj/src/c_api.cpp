#include "zeroleak/zeroleak.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <limits>
#include <new>
#include <string>
#include <utility>

#include "zeroleak/app.hpp"
#include "zeroleak/codec.hpp"
#include "zeroleak/error.hpp"
#include "zeroleak/io.hpp"
#include "zeroleak/linalg.hpp"
#include "zeroleak/mechanism.hpp"

struct zl_distribution {
  zeroleak::JointDistribution d;
};
struct zl_mechanism {
  zeroleak::Mechanism m;
};
struct zl_code {
  zeroleak::PrivateCode c;
};

namespace {

thread_local std::string g_last_error;

zl_status Fail(zl_status s, std::string message) {
  g_last_error = std::move(message);
  return s;
}

template <typename F>
zl_status Guard(F&& body) {
  try {
    g_last_error.clear();
    return body();
  } catch (const zeroleak::Error& e) {
    return Fail(static_cast<zl_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return Fail(ZL_INTERNAL_ERROR, "out of memory");
  } catch (const std::exception& e) {
    return Fail(ZL_INTERNAL_ERROR, e.what());
  } catch (...) {
    return Fail(ZL_INTERNAL_ERROR, "unknown exception");
  }
}

zeroleak::Tolerances Tol(const zl_tolerances* t) {
  zeroleak::Tolerances out;
  if (t != nullptr) {
    out.prob = t->prob;
    out.lp = t->lp;
    out.vertex = t->vertex;
    out.rank = t->rank;
    out.ent = t->ent;
  }
  return out;
}

char* CopyString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

zl_status CopyOut(const std::vector<double>& v, double* out, size_t capacity) {
  if (out == nullptr) return Fail(ZL_INVALID_ARGUMENT, "null output buffer");
  if (capacity < v.size())
    return Fail(ZL_BUFFER_TOO_SMALL, "buffer holds " + std::to_string(capacity) + " values, need " +
                                         std::to_string(v.size()));
  std::copy(v.begin(), v.end(), out);
  return ZL_OK;
}

#define ZL_REQUIRE(cond)                                         \
  do {                                                           \
    if (!(cond)) return Fail(ZL_INVALID_ARGUMENT, "null argument: " #cond); \
  } while (0)

zeroleak::Matrix MatrixFrom(const double* data, size_t rows, size_t cols) {
  zeroleak::Matrix m(rows, cols);
  for (size_t r = 0; r < rows; ++r)
    for (size_t c = 0; c < cols; ++c) m(r, c) = data[r * cols + c];
  return m;
}

}  // namespace

extern "C" {

zl_tolerances zl_default_tolerances(void) {
  const zeroleak::Tolerances t;
  return {t.prob, t.lp, t.vertex, t.rank, t.ent};
}

const char* zl_last_error(void) { return g_last_error.c_str(); }

const char* zl_status_name(zl_status status) {
  if (status == ZL_BUFFER_TOO_SMALL) return "BufferTooSmall";
  return zeroleak::ErrorCodeName(static_cast<zeroleak::ErrorCode>(status));
}

void zl_string_free(char* s) { std::free(s); }

zl_status zl_distribution_from_joint(const double* joint, size_t x_size, size_t y_size,
                                     const zl_tolerances* tol, zl_distribution** out) {
  ZL_REQUIRE(joint != nullptr && out != nullptr);
  return Guard([&] {
    if (x_size == 0 || y_size == 0) return Fail(ZL_BAD_SHAPE, "empty joint");
    *out = new zl_distribution{
        zeroleak::JointDistribution::FromMatrix(MatrixFrom(joint, x_size, y_size), Tol(tol).prob)};
    return ZL_OK;
  });
}

zl_status zl_distribution_from_kernel(const double* kernel, const double* p_y, size_t x_size,
                                      size_t y_size, const zl_tolerances* tol, zl_distribution** out) {
  ZL_REQUIRE(kernel != nullptr && p_y != nullptr && out != nullptr);
  return Guard([&] {
    if (x_size == 0 || y_size == 0) return Fail(ZL_BAD_SHAPE, "empty kernel");
    *out = new zl_distribution{zeroleak::JointDistribution::FromKernel(
        MatrixFrom(kernel, x_size, y_size), std::span<const double>(p_y, y_size), Tol(tol).prob)};
    return ZL_OK;
  });
}

zl_status zl_distribution_parse(const char* text, const zl_tolerances* tol, zl_distribution** out) {
  ZL_REQUIRE(text != nullptr && out != nullptr);
  return Guard([&] {
    *out = new zl_distribution{zeroleak::ParseDistribution(text, Tol(tol).prob)};
    return ZL_OK;
  });
}

zl_status zl_distribution_load(const char* path, const zl_tolerances* tol, zl_distribution** out) {
  ZL_REQUIRE(path != nullptr && out != nullptr);
  return Guard([&] {
    *out = new zl_distribution{zeroleak::LoadDistribution(path, Tol(tol).prob)};
    return ZL_OK;
  });
}

void zl_distribution_free(zl_distribution* d) { delete d; }

size_t zl_distribution_x_size(const zl_distribution* d) { return d ? d->d.x_size() : 0; }
size_t zl_distribution_y_size(const zl_distribution* d) { return d ? d->d.y_size() : 0; }

zl_status zl_distribution_marginal_x(const zl_distribution* d, double* out, size_t capacity) {
  ZL_REQUIRE(d != nullptr);
  return CopyOut(d->d.marginal_x(), out, capacity);
}

zl_status zl_distribution_marginal_y(const zl_distribution* d, double* out, size_t capacity) {
  ZL_REQUIRE(d != nullptr);
  return CopyOut(d->d.marginal_y(), out, capacity);
}

zl_status zl_distribution_entropies(const zl_distribution* d, zl_entropies* out) {
  ZL_REQUIRE(d != nullptr && out != nullptr);
  return Guard([&] {
    out->h_x = zeroleak::Entropy(d->d.marginal_x());
    out->h_y = zeroleak::Entropy(d->d.marginal_y());
    out->h_y_given_x = zeroleak::ConditionalEntropyYGivenX(d->d);
    out->i_xy = zeroleak::MutualInformation(d->d);
    return ZL_OK;
  });
}

zl_status zl_distribution_rank(const zl_distribution* d, const zl_tolerances* tol, size_t* rank,
                               size_t* nullity) {
  ZL_REQUIRE(d != nullptr && rank != nullptr && nullity != nullptr);
  return Guard([&] {
    const auto rn = zeroleak::RankAndNullity(d->d.x_given_y().matrix(), Tol(tol).rank);
    *rank = rn.rank;
    *nullity = rn.nullity;
    return ZL_OK;
  });
}

zl_status zl_membership_check(const zl_distribution* d, const zl_tolerances* tol, zl_membership* out) {
  ZL_REQUIRE(d != nullptr && out != nullptr);
  return Guard([&] {
    const auto m = zeroleak::MembershipInPhat(d->d, Tol(tol));
    switch (m.status) {
      case zeroleak::MembershipStatus::kMember: out->status = ZL_MEMBER; break;
      case zeroleak::MembershipStatus::kBoundary: out->status = ZL_BOUNDARY; break;
      case zeroleak::MembershipStatus::kNonMember: out->status = ZL_NOT_MEMBER; break;
    }
    out->g0 = m.g0;
    out->h_y_given_x = m.h_y_given_x;
    out->via_deterministic = m.via_deterministic ? 1 : 0;
    return ZL_OK;
  });
}

zl_status zl_solve_g0(const zl_distribution* d, const zl_tolerances* tol, double* g0, zl_mechanism** out) {
  ZL_REQUIRE(d != nullptr && out != nullptr);
  return Guard([&] {
    auto s = zeroleak::SolveG0(d->d, Tol(tol));
    if (g0 != nullptr) *g0 = s.value;
    *out = new zl_mechanism{std::move(s.mech)};
    return ZL_OK;
  });
}

void zl_mechanism_free(zl_mechanism* m) { delete m; }
size_t zl_mechanism_u_size(const zl_mechanism* m) { return m ? m->m.u_size() : 0; }
double zl_mechanism_entropy(const zl_mechanism* m) {
  return m ? m->m.entropy() : std::numeric_limits<double>::quiet_NaN();
}

zl_status zl_mechanism_p_u(const zl_mechanism* m, double* out, size_t capacity) {
  ZL_REQUIRE(m != nullptr);
  return CopyOut(m->m.p_u(), out, capacity);
}

zl_status zl_mechanism_p_y_given_u(const zl_mechanism* m, double* out, size_t capacity) {
  ZL_REQUIRE(m != nullptr);
  const auto& k = m->m.p_y_given_u();
  std::vector<double> flat;
  flat.reserve(k.rows() * k.cols());
  for (size_t r = 0; r < k.rows(); ++r)
    for (size_t c = 0; c < k.cols(); ++c) flat.push_back(k(r, c));
  return CopyOut(flat, out, capacity);
}

zl_status zl_mechanism_build_decode_table(const zl_distribution* d, const zl_mechanism* m,
                                          const zl_tolerances* tol, zl_mechanism** out) {
  ZL_REQUIRE(d != nullptr && m != nullptr && out != nullptr);
  return Guard([&] {
    *out = new zl_mechanism{zeroleak::BuildDecodeTable(d->d, m->m, Tol(tol))};
    return ZL_OK;
  });
}

zl_status zl_mechanism_decode(const zl_mechanism* m, size_t x, size_t u, size_t* y) {
  ZL_REQUIRE(m != nullptr && y != nullptr);
  return Guard([&] {
    if (x >= m->m.x_size() || u >= m->m.u_size()) return Fail(ZL_INVALID_ARGUMENT, "index out of range");
    const auto v = m->m.Decode(x, u);
    *y = v ? *v : SIZE_MAX;
    return ZL_OK;
  });
}

zl_status zl_mechanism_information(const zl_distribution* d, const zl_mechanism* m,
                                   zl_information_terms* out) {
  ZL_REQUIRE(d != nullptr && m != nullptr && out != nullptr);
  return Guard([&] {
    const auto t = zeroleak::ComputeInformationTerms(d->d, m->m);
    *out = {t.h_u, t.i_uy, t.i_xu, t.h_y_given_x, t.i_xu_given_y, t.h_y_given_xu, t.KeyEquationResidual()};
    return ZL_OK;
  });
}

zl_status zl_mechanism_bounds_compute(const zl_distribution* d, double achieved_entropy,
                                      const zl_tolerances* tol, zl_mechanism_bounds* out) {
  ZL_REQUIRE(d != nullptr && out != nullptr);
  return Guard([&] {
    const auto b = zeroleak::EntropyBounds(d->d, achieved_entropy, Tol(tol));
    out->h_y_given_x = b.h_y_given_x;
    out->k_lower = b.k_lower;
    out->k_upper = b.k_upper;
    out->k_upper_strengthened = b.k_upper_strengthened;
    out->log_nullity_bound = b.log_nullity_bound;
    out->nullity = b.nullity;
    out->rank_a = b.rank_a;
    out->unique = b.unique ? 1 : 0;
    out->degenerate = b.degenerate ? 1 : 0;
    out->strengthened_fallback = b.strengthened_fallback ? 1 : 0;
    return ZL_OK;
  });
}

zl_status zl_code_two_part(const zl_distribution* d, const zl_mechanism* m, zl_code** out) {
  ZL_REQUIRE(d != nullptr && m != nullptr && out != nullptr);
  return Guard([&] {
    *out = new zl_code{zeroleak::BuildTwoPart(d->d, m->m)};
    return ZL_OK;
  });
}

zl_status zl_code_direct_pad(const zl_distribution* d, zl_code** out) {
  ZL_REQUIRE(d != nullptr && out != nullptr);
  return Guard([&] {
    *out = new zl_code{zeroleak::BuildDirectPad(d->d)};
    return ZL_OK;
  });
}

zl_status zl_code_plain(const zl_distribution* d, zl_code** out) {
  ZL_REQUIRE(d != nullptr && out != nullptr);
  return Guard([&] {
    *out = new zl_code{zeroleak::BuildPlainCode(d->d)};
    return ZL_OK;
  });
}

void zl_code_free(zl_code* c) { delete c; }

zl_scheme zl_code_scheme(const zl_code* c) {
  if (c == nullptr) return ZL_PLAIN;
  switch (c->c.scheme) {
    case zeroleak::Scheme::kTwoPart: return ZL_TWO_PART;
    case zeroleak::Scheme::kDirectPad: return ZL_DIRECT_PAD;
    case zeroleak::Scheme::kPlain: break;
  }
  return ZL_PLAIN;
}

size_t zl_code_key_size(const zl_code* c) { return c ? c->c.key_size : 0; }

zl_status zl_code_encode(const zl_code* c, size_t y, size_t w, uint64_t* rng_state, char** bits) {
  ZL_REQUIRE(c != nullptr && rng_state != nullptr && bits != nullptr);
  return Guard([&] {
    zeroleak::RandomSource rng(*rng_state);
    const auto out = zeroleak::Encode(c->c, y, w, rng);
    *bits = CopyString(out);
    *rng_state = rng.state();
    return ZL_OK;
  });
}

zl_status zl_code_encode_joint(const zl_code* c, size_t x, size_t y, size_t w, uint64_t* rng_state,
                               char** bits) {
  ZL_REQUIRE(c != nullptr && rng_state != nullptr && bits != nullptr);
  return Guard([&] {
    zeroleak::RandomSource rng(*rng_state);
    const auto out = zeroleak::EncodeJoint(c->c, x, y, w, rng);
    *bits = CopyString(out);
    *rng_state = rng.state();
    return ZL_OK;
  });
}

zl_status zl_code_decode(const zl_code* c, const char* bits, size_t w, size_t* y) {
  ZL_REQUIRE(c != nullptr && bits != nullptr && y != nullptr);
  return Guard([&] {
    *y = zeroleak::Decode(c->c, bits, w);
    return ZL_OK;
  });
}

zl_status zl_code_audit(const zl_code* c, const zl_distribution* d, zl_audit* out) {
  ZL_REQUIRE(c != nullptr && d != nullptr && out != nullptr);
  return Guard([&] {
    const auto a = zeroleak::Audit(c->c, d->d);
    *out = {a.mi_c_x,       a.mi_c_x_given_y, a.lossless_prob, a.max_expected_length(),
            a.key_spread(), a.pad_entropy,    a.mi_pad_x,      a.distinct_messages};
    return ZL_OK;
  });
}

zl_status zl_code_serialize(const zl_code* c, char** text) {
  ZL_REQUIRE(c != nullptr && text != nullptr);
  return Guard([&] {
    *text = CopyString(zeroleak::SerializeCode(c->c));
    return ZL_OK;
  });
}

zl_status zl_code_parse(const char* text, zl_code** out) {
  ZL_REQUIRE(text != nullptr && out != nullptr);
  return Guard([&] {
    *out = new zl_code{zeroleak::ParseCode(text)};
    return ZL_OK;
  });
}

zl_run_config zl_default_run_config(void) {
  zl_run_config c{};
  c.input_path = nullptr;
  c.command = "analyze";
  c.tol = zl_default_tolerances();
  c.seed = zeroleak::kDefaultSeed;
  c.format = "text";
  c.n = 100;
  c.family = "det-f";
  c.code_path = nullptr;
  c.save_code_path = nullptr;
  return c;
}

zl_status zl_run(const zl_run_config* config, int* exit_status, char** report) {
  ZL_REQUIRE(config != nullptr && exit_status != nullptr && report != nullptr);
  return Guard([&] {
    zeroleak::RunConfig rc;
    if (config->input_path) rc.input_path = config->input_path;
    const auto cmd = zeroleak::ParseCommand(config->command ? config->command : "analyze");
    if (!cmd) return Fail(ZL_INVALID_ARGUMENT, std::string("unknown command '") + config->command + "'");
    rc.command = *cmd;
    rc.tol = Tol(&config->tol);
    rc.seed = config->seed;
    const auto fmt = zeroleak::ParseFormat(config->format ? config->format : "text");
    if (!fmt) return Fail(ZL_INVALID_ARGUMENT, std::string("unknown format '") + config->format + "'");
    rc.format = *fmt;
    rc.n = config->n;
    const auto fam = zeroleak::ParseFamily(config->family ? config->family : "det-f");
    if (!fam) return Fail(ZL_INVALID_ARGUMENT, std::string("unknown family '") + config->family + "'");
    rc.family = *fam;
    if (config->code_path) rc.code_path = config->code_path;
    if (config->save_code_path) rc.save_code_path = config->save_code_path;
    const auto result = zeroleak::Run(rc);
    *report = CopyString(result.report);
    *exit_status = result.exit_status;
    return ZL_OK;
  });
}

}  // extern "C"
