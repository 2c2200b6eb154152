#include "eof/model_io.hpp"

#include "eof/error.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace eof {

namespace {

constexpr const char* kMagic = "eof-model v1";

std::string num(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

void write_row(std::ostream& out, const Vector& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) out << (i ? " " : "") << num(v(i));
    out << '\n';
}

std::string_view rf_tag(RfMethod m) {
    switch (m) {
        case RfMethod::RKS: return "rks";
        case RfMethod::ORF: return "orf";
        case RfMethod::LKRF: return "lkrf";
        case RfMethod::EERF: return "eerf";
    }
    return "rks";
}

class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    std::istringstream line() {
        std::string s;
        do {
            if (!std::getline(in_, s)) fail("unexpected end of model");
            ++row_;
        } while (s.empty());
        return std::istringstream(s);
    }

    std::string raw_line() {
        std::string s;
        if (!std::getline(in_, s)) fail("unexpected end of model");
        ++row_;
        return s;
    }

    template <class T>
    T value(std::string_view key) {
        auto ls = line();
        std::string k;
        T v{};
        ls >> k;
        if (k != key) fail("expected '" + std::string(key) + "', found '" + k + "'");
        if (!(ls >> v)) fail("bad value for '" + std::string(key) + "'");
        return v;
    }

    std::vector<double> numbers(std::size_t count) {
        auto ls = line();
        std::vector<double> out(count);
        for (auto& v : out) {
            std::string tok;
            if (!(ls >> tok)) fail("too few values");
            const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (ec != std::errc() || ptr != tok.data() + tok.size()) fail("bad number '" + tok + "'");
        }
        std::string extra;
        if (ls >> extra) fail("too many values");
        return out;
    }

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, row_, 0); }

private:
    std::istream& in_;
    std::size_t row_ = 0;
};

Vector to_vector(const std::vector<double>& v) { return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size())); }

}  // namespace

void write_model(std::ostream& out, const SavedModel& saved) {
    const Model& model = saved.model;
    if (!model.feature_map) throw InvalidData("model has no feature map");
    out << kMagic << '\n';
    out << "task " << task_name(model.task) << '\n';
    out << "lambda " << num(model.lambda) << '\n';

    if (const auto* e = std::get_if<EofFeatureMap>(&*model.feature_map)) {
        if (e->kernel.kind() == KernelKind::Custom) throw InvalidData("custom kernels cannot be serialized");
        out << "map eof\n";
        out << "kernel " << kind_name(e->kernel.kind()) << '\n';
        out << "omega " << num(e->kernel.omega()) << '\n';
        out << "dim " << e->kernel.dim() << '\n';
        out << "strict " << (e->kernel.policy() == DomainPolicy::Strict ? 1 : 0) << '\n';
        out << "scale " << (e->scale == FeatureScale::Raw ? "raw" : "normalized") << '\n';
        out << "features " << e->design.size() << '\n';
        for (const auto& idx : e->design) {
            for (std::size_t d = 0; d < idx.level.size(); ++d) out << (d ? " " : "") << idx.level[d];
            for (auto p : idx.pos) out << ' ' << p;
            out << '\n';
        }
    } else {
        const auto& rf = std::get<RandomFeatureMap>(*model.feature_map);
        out << "map " << rf_tag(rf.method) << '\n';
        out << "sigma " << num(rf.sigma) << '\n';
        out << "seed " << rf.seed << '\n';
        out << "pool " << rf.pool_size << '\n';
        out << "dim " << rf.dim() << '\n';
        out << "features " << rf.size() << '\n';
        for (Eigen::Index m = 0; m < rf.frequencies.rows(); ++m) {
            for (Eigen::Index d = 0; d < rf.frequencies.cols(); ++d) out << num(rf.frequencies(m, d)) << ' ';
            out << num(rf.phases(m)) << '\n';
        }
    }

    if (saved.scaler) {
        const Scaler& s = *saved.scaler;
        out << "scaler " << s.x_min.size() << '\n';
        write_row(out, s.x_min);
        write_row(out, s.x_max);
        out << "y " << num(s.y_min) << ' ' << num(s.y_max) << '\n';
    } else {
        out << "scaler none\n";
    }

    out << "weights " << model.weights.size() << '\n';
    for (Eigen::Index i = 0; i < model.weights.size(); ++i) out << num(model.weights(i)) << '\n';
    out << "end\n";
}

void save_model(const std::filesystem::path& path, const SavedModel& saved) {
    std::ofstream out(path);
    if (!out) throw InvalidData("cannot write " + path.string());
    write_model(out, saved);
}

SavedModel read_model(std::istream& in) {
    Reader rd(in);
    if (rd.raw_line() != kMagic) rd.fail("not an eof model file");

    SavedModel saved;
    Model& model = saved.model;
    try {
        model.task = parse_task(rd.value<std::string>("task"));
    } catch (const std::invalid_argument& e) {
        rd.fail(e.what());
    }
    model.lambda = rd.value<double>("lambda");
    const auto map = rd.value<std::string>("map");

    if (map == "eof") {
        const auto kernel = rd.value<std::string>("kernel");
        const auto omega = rd.value<double>("omega");
        const auto dim = rd.value<int>("dim");
        const auto strict = rd.value<int>("strict");
        const auto scale = rd.value<std::string>("scale");
        const auto count = rd.value<std::size_t>("features");
        if (dim < 1) rd.fail("dimension must be positive");
        if (scale != "raw" && scale != "normalized") rd.fail("unknown scale '" + scale + "'");
        KernelKind kind{};
        try {
            kind = parse_kind(kernel);
        } catch (const std::invalid_argument& e) {
            rd.fail(e.what());
        }
        std::vector<FeatureIndex> indices;
        indices.reserve(count);
        for (std::size_t m = 0; m < count; ++m) {
            const auto v = rd.numbers(2 * static_cast<std::size_t>(dim));
            FeatureIndex idx;
            for (int d = 0; d < dim; ++d) {
                idx.level.push_back(static_cast<int>(v[static_cast<std::size_t>(d)]));
                idx.pos.push_back(static_cast<std::int64_t>(v[static_cast<std::size_t>(dim + d)]));
            }
            indices.push_back(std::move(idx));
        }
        model.feature_map = EofFeatureMap{
            KernelSpec(kind, omega, dim, strict ? DomainPolicy::Strict : DomainPolicy::Clamp),
            IndexSet(std::move(indices)), scale == "raw" ? FeatureScale::Raw : FeatureScale::Normalized};
    } else if (map == "rks" || map == "orf" || map == "lkrf" || map == "eerf") {
        RandomFeatureMap rf;
        rf.method = map == "rks" ? RfMethod::RKS : map == "orf" ? RfMethod::ORF : map == "lkrf" ? RfMethod::LKRF : RfMethod::EERF;
        rf.sigma = rd.value<double>("sigma");
        rf.seed = rd.value<std::uint64_t>("seed");
        rf.pool_size = rd.value<std::size_t>("pool");
        const auto dim = rd.value<int>("dim");
        const auto count = rd.value<std::size_t>("features");
        if (dim < 1) rd.fail("dimension must be positive");
        rf.frequencies.resize(static_cast<Eigen::Index>(count), dim);
        rf.phases.resize(static_cast<Eigen::Index>(count));
        for (std::size_t m = 0; m < count; ++m) {
            const auto v = rd.numbers(static_cast<std::size_t>(dim) + 1);
            const auto r = static_cast<Eigen::Index>(m);
            for (int d = 0; d < dim; ++d) rf.frequencies(r, d) = v[static_cast<std::size_t>(d)];
            rf.phases(r) = v.back();
        }
        model.feature_map = std::move(rf);
    } else {
        rd.fail("unknown map '" + map + "'");
    }

    {
        auto ls = rd.line();
        std::string key, arg;
        ls >> key >> arg;
        if (key != "scaler") rd.fail("expected 'scaler'");
        if (arg != "none") {
            const auto d = static_cast<std::size_t>(std::stoul(arg));
            Scaler s;
            s.task = model.task;
            s.x_min = to_vector(rd.numbers(d));
            s.x_max = to_vector(rd.numbers(d));
            auto ys = rd.line();
            std::string tag;
            ys >> tag >> s.y_min >> s.y_max;
            if (tag != "y" || !ys) rd.fail("bad target scaling line");
            saved.scaler = std::move(s);
        }
    }

    const auto count = rd.value<std::size_t>("weights");
    if (count != output_dim(*model.feature_map)) rd.fail("weight count does not match the feature map");
    model.weights.resize(static_cast<Eigen::Index>(count));
    for (std::size_t i = 0; i < count; ++i) model.weights(static_cast<Eigen::Index>(i)) = rd.numbers(1)[0];
    if (rd.raw_line() != "end") rd.fail("missing 'end'");
    return saved;
}

SavedModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string(), 0, 0);
    return read_model(in);
}

}  // namespace eof
