#include "codasim/building_file.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <utility>

namespace codasim {

namespace {

enum class Tok { Ident, Str, Num, LBrace, RBrace, LParen, RParen, Equals, Comma, End };

struct Token {
    Tok type = Tok::End;
    std::string text; // identifier or string contents
    double number = 0;
    int line = 1;
    int col = 1;
};

std::string describe(const Token& t) {
    switch (t.type) {
    case Tok::Ident: return "'" + t.text + "'";
    case Tok::Str: return "a string";
    case Tok::Num: return "a number";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Equals: return "'='";
    case Tok::Comma: return "','";
    case Tok::End: return "end of file";
    }
    return "?";
}

bool simulationTypeFromName(const std::string& name, SimulationType& out) {
    for (SimulationType t : {SimulationType::ThermalOnly, SimulationType::ThermalAirflow,
                             SimulationType::AirflowOnly, SimulationType::ThermalAirflowMoisture}) {
        if (name == simulationTypeName(t)) {
            out = t;
            return true;
        }
    }
    return false;
}

bool outputVariableFromName(const std::string& name, OutputVariable& out) {
    for (OutputVariable v :
         {OutputVariable::ZoneAirTemperature, OutputVariable::SurfaceTemperatureInterior,
          OutputVariable::SurfaceTemperatureExterior, OutputVariable::SurfaceFlux,
          OutputVariable::ZonePressure, OutputVariable::LinkFlow, OutputVariable::ZoneHumidity,
          OutputVariable::HvacPower, OutputVariable::ComfortIndex}) {
        if (name == outputVariableName(v)) {
            out = v;
            return true;
        }
    }
    return false;
}

// Thrown internally to unwind after the first recorded diagnostic; parsing
// stays a total function.
struct ParseAbort {};

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    BuildingParseResult run() {
        try {
            lexAll();
            parseTop();
        } catch (const ParseAbort&) {
            return std::move(result_);
        }
        auto issues = validate(result_.description);
        for (Diagnostic& d : issues) {
            const auto it = locations_.find(d.entity);
            d.location = it != locations_.end() ? it->second : buildingLoc_;
            result_.diagnostics.push_back(std::move(d));
        }
        return std::move(result_);
    }

private:
    std::string_view text_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
    std::vector<Token> tokens_;
    size_t cur_ = 0;

    BuildingParseResult result_;
    std::map<std::string, SourceLocation> locations_;
    SourceLocation buildingLoc_ = {1, 1};
    std::string context_ = "file";

    [[noreturn]] void fail(int line, int col, const std::string& msg) {
        result_.diagnostics.push_back({context_, msg, {line, col}});
        throw ParseAbort{};
    }
    [[noreturn]] void fail(const Token& t, const std::string& msg) { fail(t.line, t.col, msg); }

    // ---- lexer ----

    char peekc() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
    void step() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void lexAll() {
        // strict magic line first
        size_t eol = text_.find('\n');
        std::string_view first = text_.substr(0, eol == std::string_view::npos ? text_.size() : eol);
        if (!first.empty() && first.back() == '\r') first.remove_suffix(1);
        if (first != kBuildingMagic)
            fail(1, 1, std::string("missing or wrong magic line; expected '") +
                           std::string(kBuildingMagic) + "'");
        if (eol == std::string_view::npos) {
            pos_ = text_.size();
        } else {
            pos_ = eol + 1;
            line_ = 2;
            col_ = 1;
        }

        while (pos_ < text_.size()) {
            const char c = peekc();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                step();
            } else if (c == '#') {
                while (pos_ < text_.size() && peekc() != '\n') step();
            } else if (c == '{' || c == '}' || c == '(' || c == ')' || c == '=' || c == ',') {
                Token t;
                t.line = line_;
                t.col = col_;
                switch (c) {
                case '{': t.type = Tok::LBrace; break;
                case '}': t.type = Tok::RBrace; break;
                case '(': t.type = Tok::LParen; break;
                case ')': t.type = Tok::RParen; break;
                case '=': t.type = Tok::Equals; break;
                default: t.type = Tok::Comma; break;
                }
                tokens_.push_back(std::move(t));
                step();
            } else if (c == '"') {
                lexString();
            } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                Token t;
                t.type = Tok::Ident;
                t.line = line_;
                t.col = col_;
                while (pos_ < text_.size() &&
                       (std::isalnum(static_cast<unsigned char>(peekc())) || peekc() == '_')) {
                    t.text += peekc();
                    step();
                }
                tokens_.push_back(std::move(t));
            } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' ||
                       c == '.') {
                lexNumber();
            } else {
                fail(line_, col_, std::string("unexpected character '") + c + "'");
            }
        }
        Token end;
        end.type = Tok::End;
        end.line = line_;
        end.col = col_;
        tokens_.push_back(std::move(end));
    }

    void lexString() {
        Token t;
        t.type = Tok::Str;
        t.line = line_;
        t.col = col_;
        step(); // opening quote
        while (true) {
            if (pos_ >= text_.size()) fail(t.line, t.col, "unterminated string");
            const char c = peekc();
            if (c == '"') {
                step();
                break;
            }
            if (c == '\\') {
                step();
                const char e = peekc();
                if (pos_ >= text_.size() || (e != '"' && e != '\\'))
                    fail(line_, col_, "unsupported escape in string");
                t.text += e;
                step();
                continue;
            }
            if (static_cast<unsigned char>(c) < 0x20)
                fail(line_, col_, "control character in string");
            t.text += c;
            step();
        }
        tokens_.push_back(std::move(t));
    }

    void lexNumber() {
        Token t;
        t.type = Tok::Num;
        t.line = line_;
        t.col = col_;
        const size_t start = pos_;
        if (peekc() == '-' || peekc() == '+') step();
        int mantissaDigits = 0;
        while (std::isdigit(static_cast<unsigned char>(peekc()))) {
            ++mantissaDigits;
            step();
        }
        if (peekc() == '.') {
            step();
            while (std::isdigit(static_cast<unsigned char>(peekc()))) {
                ++mantissaDigits;
                step();
            }
        }
        if (mantissaDigits == 0) fail(t.line, t.col, "malformed number");
        if (peekc() == 'e' || peekc() == 'E') {
            step();
            if (peekc() == '-' || peekc() == '+') step();
            if (!std::isdigit(static_cast<unsigned char>(peekc())))
                fail(t.line, t.col, "malformed number exponent");
            while (std::isdigit(static_cast<unsigned char>(peekc()))) step();
        }
        const std::string span(text_.substr(start, pos_ - start));
        t.number = std::strtod(span.c_str(), nullptr);
        if (!std::isfinite(t.number)) fail(t.line, t.col, "number out of range");
        tokens_.push_back(std::move(t));
    }

    // ---- token stream ----

    const Token& peek() const { return tokens_[cur_]; }
    const Token& get() {
        const Token& t = tokens_[cur_];
        if (t.type != Tok::End) ++cur_;
        return t;
    }
    Token expect(Tok type, const char* what) {
        if (peek().type != type)
            fail(peek(), std::string("expected ") + what + ", got " + describe(peek()));
        return get();
    }
    bool accept(Tok type) {
        if (peek().type != type) return false;
        get();
        return true;
    }

    double keyNumber() {
        expect(Tok::Equals, "'='");
        return expect(Tok::Num, "a number").number;
    }
    int keyInt(const char* what) {
        expect(Tok::Equals, "'='");
        const Token t = expect(Tok::Num, "an integer");
        if (t.number != std::floor(t.number) || std::abs(t.number) > 1e9)
            fail(t, std::string(what) + " must be an integer");
        return static_cast<int>(t.number);
    }
    bool keyBool(const char* what) {
        expect(Tok::Equals, "'='");
        const Token t = expect(Tok::Ident, "'true' or 'false'");
        if (t.text == "true") return true;
        if (t.text == "false") return false;
        fail(t, std::string(what) + " must be 'true' or 'false'");
    }
    Schedule keySchedule() {
        expect(Tok::Equals, "'='");
        if (peek().type == Tok::Num) return Schedule{get().number};
        const Token h = expect(Tok::Ident, "a number or hourly(...)");
        if (h.text != "hourly") fail(h, "expected a number or hourly(...)");
        expect(Tok::LParen, "'('");
        std::vector<double> values;
        if (!accept(Tok::RParen)) {
            do {
                values.push_back(expect(Tok::Num, "a number").number);
            } while (accept(Tok::Comma));
            expect(Tok::RParen, "')'");
        }
        if (values.size() != 24)
            fail(h, "hourly schedule needs 24 values, got " + std::to_string(values.size()));
        return Schedule{std::move(values)};
    }

    std::string namedHeader(const char* what) {
        const Token id = expect(Tok::Str, what);
        if (!locations_.count(id.text)) locations_[id.text] = {id.line, id.col};
        context_ = id.text;
        return id.text;
    }

    // ---- grammar ----

    void parseTop() {
        const Token b = expect(Tok::Ident, "'building'");
        if (b.text != "building") fail(b, "expected 'building'");
        buildingLoc_ = {b.line, b.col};
        BuildingDescription& d = result_.description;
        d.name = expect(Tok::Str, "the building name").text;
        expect(Tok::LBrace, "'{'");
        while (!accept(Tok::RBrace)) {
            const Token key = expect(Tok::Ident, "a section keyword or '}'");
            context_ = "file";
            if (key.text == "simulation") {
                expect(Tok::Equals, "'='");
                const Token v = expect(Tok::Ident, "a simulation type");
                if (!simulationTypeFromName(v.text, d.simulationType))
                    fail(v, "unknown simulation type '" + v.text + "'");
            } else if (key.text == "site") {
                locations_["site"] = {key.line, key.col};
                parseSite(d.site);
            } else if (key.text == "coupling") {
                locations_["coupling"] = {key.line, key.col};
                parseCoupling(d.coupling);
            } else if (key.text == "cp_table") {
                locations_["cp_table"] = {key.line, key.col};
                parseCpTable(d.cpTable);
            } else if (key.text == "zone") {
                parseZone();
            } else if (key.text == "inter_ambiance") {
                parseInterAmbiance();
            } else if (key.text == "outputs") {
                parseOutputs();
            } else {
                fail(key, "unknown section '" + key.text + "' in building");
            }
        }
        if (peek().type != Tok::End) fail(peek(), "unexpected content after the building block");
    }

    void parseSite(Site& s) {
        expect(Tok::LBrace, "'{'");
        while (!accept(Tok::RBrace)) {
            const Token key = expect(Tok::Ident, "a site key or '}'");
            if (key.text == "latitude") s.latitude = keyNumber();
            else if (key.text == "longitude") s.longitude = keyNumber();
            else if (key.text == "meridian") s.meridian = keyNumber();
            else if (key.text == "sky_temp_offset") s.skyTempOffset = keyNumber();
            else fail(key, "unknown key '" + key.text + "' in site");
        }
    }

    void parseCoupling(CouplingOptions& c) {
        expect(Tok::LBrace, "'{'");
        while (!accept(Tok::RBrace)) {
            const Token key = expect(Tok::Ident, "a coupling key or '}'");
            if (key.text == "mode") {
                expect(Tok::Equals, "'='");
                const Token v = expect(Tok::Ident, "'one_way' or 'iterative'");
                if (v.text == "one_way") c.thermalAirflowCoupling = CouplingMode::OneWay;
                else if (v.text == "iterative") c.thermalAirflowCoupling = CouplingMode::Iterative;
                else fail(v, "unknown coupling mode '" + v.text + "'");
            } else if (key.text == "max_iterations") {
                c.maxCouplingIterations = keyInt("max_iterations");
            } else if (key.text == "air_temp_tolerance") {
                c.airTempTolerance = keyNumber();
            } else if (key.text == "flow_tolerance") {
                c.flowTolerance = keyNumber();
            } else {
                fail(key, "unknown key '" + key.text + "' in coupling");
            }
        }
    }

    void parseCpTable(std::vector<CpSector>& table) {
        expect(Tok::LBrace, "'{'");
        while (!accept(Tok::RBrace)) {
            const Token t = expect(Tok::Ident, "'sector' or '}'");
            if (t.text != "sector") fail(t, "expected 'sector(from, to, cp)'");
            expect(Tok::LParen, "'('");
            CpSector s;
            s.fromDeg = expect(Tok::Num, "a number").number;
            expect(Tok::Comma, "','");
            s.toDeg = expect(Tok::Num, "a number").number;
            expect(Tok::Comma, "','");
            s.cp = expect(Tok::Num, "a number").number;
            expect(Tok::RParen, "')'");
            table.push_back(s);
        }
    }

    void parseLayers(std::vector<Layer>& layers) {
        expect(Tok::LBrace, "'{'");
        while (!accept(Tok::RBrace)) {
            const Token t = expect(Tok::Ident, "'layer' or '}'");
            if (t.text != "layer")
                fail(t, "expected 'layer(conductivity, density, specific_heat, thickness)'");
            expect(Tok::LParen, "'('");
            Layer l;
            l.conductivity = expect(Tok::Num, "a number").number;
            expect(Tok::Comma, "','");
            l.density = expect(Tok::Num, "a number").number;
            expect(Tok::Comma, "','");
            l.specificHeat = expect(Tok::Num, "a number").number;
            expect(Tok::Comma, "','");
            l.thickness = expect(Tok::Num, "a number").number;
            expect(Tok::RParen, "')'");
            layers.push_back(l);
        }
    }

    void parseSurface(SurfaceProperties& s) {
        expect(Tok::LBrace, "'{'");
        while (!accept(Tok::RBrace)) {
            const Token key = expect(Tok::Ident, "a surface key or '}'");
            if (key.text == "absorptance") s.shortwaveAbsorptance = keyNumber();
            else if (key.text == "emissivity") s.longwaveEmissivity = keyNumber();
            else fail(key, "unknown key '" + key.text + "' in surface block");
        }
    }

    void parseModelSel(ModelSelector& m) {
        expect(Tok::LBrace, "'{'");
        while (!accept(Tok::RBrace)) {
            const Token key = expect(Tok::Ident, "a model key or '}'");
            if (key.text == "conduction") {
                expect(Tok::Equals, "'='");
                const Token v = expect(Tok::Ident, "'r2c' or 'fd1d'");
                if (v.text == "r2c") m.conduction = ConductionModel::R2C;
                else if (v.text == "fd1d") m.conduction = ConductionModel::FD1D;
                else fail(v, "unknown conduction model '" + v.text + "'");
            } else if (key.text == "nodes_per_layer") {
                m.nodesPerLayer = keyInt("nodes_per_layer");
            } else if (key.text == "longwave") {
                expect(Tok::Equals, "'='");
                const Token v = expect(Tok::Ident, "'radiant_mean' or 'none'");
                if (v.text == "radiant_mean") m.longwaveInterior = LongwaveInteriorModel::RadiantMeanNode;
                else if (v.text == "none") m.longwaveInterior = LongwaveInteriorModel::None;
                else fail(v, "unknown longwave model '" + v.text + "'");
            } else {
                fail(key, "unknown key '" + key.text + "' in model block");
            }
        }
    }

    void parseFilm(FilmCoefficients& f) {
        expect(Tok::LBrace, "'{'");
        while (!accept(Tok::RBrace)) {
            const Token key = expect(Tok::Ident, "a film key or '}'");
            if (key.text == "conv_interior") f.convInterior = keyNumber();
            else if (key.text == "rad_interior") f.radInterior = keyNumber();
            else if (key.text == "conv_exterior") f.convExterior = keyNumber();
            else if (key.text == "rad_exterior") f.radExterior = keyNumber();
            else fail(key, "unknown key '" + key.text + "' in film block");
        }
    }

    void parseBuffer(BufferConfig& b) {
        expect(Tok::LBrace, "'{'");
        while (!accept(Tok::RBrace)) {
            const Token key = expect(Tok::Ident, "a buffer key or '}'");
            if (key.text == "enabled") b.enabled = keyBool("enabled");
            else if (key.text == "mass") b.mass = keyNumber();
            else if (key.text == "exchange") b.exchangeCoefficient = keyNumber();
            else fail(key, "unknown key '" + key.text + "' in buffer block");
        }
    }

    Component parseWall(ComponentKind kind, bool ground, bool oriented) {
        Component c;
        c.kind = kind;
        WallParams w;
        if (ground) {
            w.groundContact = true;
            w.film.convExterior = 5.9; // still air against soil
            w.film.radExterior = 0;
        }
        c.id = namedHeader("the wall id");
        expect(Tok::LBrace, "'{'");
        while (!accept(Tok::RBrace)) {
            const Token key = expect(Tok::Ident, "a wall key or '}'");
            if (key.text == "area") c.geometry.area = keyNumber();
            else if (oriented && key.text == "azimuth") c.geometry.azimuth = keyNumber();
            else if (oriented && key.text == "tilt") c.geometry.tilt = keyNumber();
            else if (ground && key.text == "far_side_temperature") w.farSideTemperature = keyNumber();
            else if (key.text == "layers") parseLayers(w.layers);
            else if (key.text == "surface_interior") parseSurface(w.surfaceInterior);
            else if (key.text == "surface_exterior") parseSurface(w.surfaceExterior);
            else if (key.text == "model") parseModelSel(w.model);
            else if (key.text == "film") parseFilm(w.film);
            else fail(key, "unknown key '" + key.text + "' in wall");
        }
        c.params = std::move(w);
        return c;
    }

    Component parseGlazing() {
        Component c;
        c.kind = ComponentKind::Glazing;
        GlazingParams g;
        c.id = namedHeader("the glazing id");
        expect(Tok::LBrace, "'{'");
        while (!accept(Tok::RBrace)) {
            const Token key = expect(Tok::Ident, "a glazing key or '}'");
            if (key.text == "area") c.geometry.area = keyNumber();
            else if (key.text == "azimuth") c.geometry.azimuth = keyNumber();
            else if (key.text == "tilt") c.geometry.tilt = keyNumber();
            else if (key.text == "u_value") g.uValue = keyNumber();
            else if (key.text == "transmittance") g.shortwaveTransmittance = keyNumber();
            else if (key.text == "film") parseFilm(g.film);
            else fail(key, "unknown key '" + key.text + "' in glazing");
        }
        c.params = g;
        return c;
    }

    Component parseCrack(ComponentKind kind, double defaultExponent) {
        Component c;
        c.kind = kind;
        CrackParams p;
        p.flowExponent = defaultExponent;
        c.id = namedHeader("the component id");
        expect(Tok::LBrace, "'{'");
        while (!accept(Tok::RBrace)) {
            const Token key = expect(Tok::Ident, "a key or '}'");
            if (key.text == "elevation") c.geometry.elevation = keyNumber();
            else if (key.text == "azimuth") c.geometry.azimuth = keyNumber();
            else if (key.text == "coefficient") p.flowCoefficient = keyNumber();
            else if (key.text == "exponent") p.flowExponent = keyNumber();
            else fail(key, "unknown key '" + key.text + "' here");
        }
        c.params = p;
        return c;
    }

    Component parseLargeOpening() {
        Component c;
        c.kind = ComponentKind::LargeOpening;
        LargeOpeningParams p;
        c.id = namedHeader("the opening id");
        expect(Tok::LBrace, "'{'");
        while (!accept(Tok::RBrace)) {
            const Token key = expect(Tok::Ident, "an opening key or '}'");
            if (key.text == "elevation") c.geometry.elevation = keyNumber();
            else if (key.text == "azimuth") c.geometry.azimuth = keyNumber();
            else if (key.text == "width") p.width = keyNumber();
            else if (key.text == "height") p.height = keyNumber();
            else if (key.text == "cd") p.dischargeCoefficient = keyNumber();
            else fail(key, "unknown key '" + key.text + "' in large_opening");
        }
        c.params = p;
        return c;
    }

    Component parseKnownFlow() {
        Component c;
        c.kind = ComponentKind::KnownFlow;
        KnownFlowParams p;
        c.id = namedHeader("the known_flow id");
        expect(Tok::LBrace, "'{'");
        while (!accept(Tok::RBrace)) {
            const Token key = expect(Tok::Ident, "'flow' or '}'");
            if (key.text == "flow") p.massFlow = keySchedule();
            else fail(key, "unknown key '" + key.text + "' in known_flow");
        }
        c.params = std::move(p);
        return c;
    }

    Component parseAirHandler() {
        Component c;
        c.kind = ComponentKind::IdealAirHandler;
        IdealAirHandlerParams p;
        c.id = namedHeader("the air_handler id");
        expect(Tok::LBrace, "'{'");
        while (!accept(Tok::RBrace)) {
            const Token key = expect(Tok::Ident, "an air_handler key or '}'");
            if (key.text == "setpoint") p.setpoint = keyNumber();
            else if (key.text == "max_power") p.maxPower = keyNumber();
            else fail(key, "unknown key '" + key.text + "' in air_handler");
        }
        c.params = p;
        return c;
    }

    Component parseInternalLoad() {
        Component c;
        c.kind = ComponentKind::InternalLoad;
        InternalLoadParams p;
        c.id = namedHeader("the internal_load id");
        expect(Tok::LBrace, "'{'");
        while (!accept(Tok::RBrace)) {
            const Token key = expect(Tok::Ident, "'power' or '}'");
            if (key.text == "power") p.power = keySchedule();
            else fail(key, "unknown key '" + key.text + "' in internal_load");
        }
        c.params = std::move(p);
        return c;
    }

    Component parseVmc() {
        Component c;
        c.kind = ComponentKind::VmcExtract;
        VmcParams p;
        c.id = namedHeader("the vmc id");
        expect(Tok::LBrace, "'{'");
        while (!accept(Tok::RBrace)) {
            const Token key = expect(Tok::Ident, "'flow' or '}'");
            if (key.text == "flow") p.extractFlow = keySchedule();
            else fail(key, "unknown key '" + key.text + "' in vmc");
        }
        c.params = std::move(p);
        return c;
    }

    void parseZone() {
        Zone z;
        z.id = namedHeader("the zone id");
        const std::string zoneId = z.id;
        expect(Tok::LBrace, "'{'");
        while (!accept(Tok::RBrace)) {
            const Token key = expect(Tok::Ident, "a zone key or '}'");
            context_ = zoneId;
            if (key.text == "air_volume") z.airVolume = keyNumber();
            else if (key.text == "reference_height") z.referenceHeight = keyNumber();
            else if (key.text == "moisture_gain") z.internalMoistureGain = keySchedule();
            else if (key.text == "buffer") parseBuffer(z.buffer);
            else if (key.text == "internal_wall")
                z.components.push_back(parseWall(ComponentKind::InternalWall, false, false));
            else if (key.text == "air_handler") z.components.push_back(parseAirHandler());
            else if (key.text == "internal_load") z.components.push_back(parseInternalLoad());
            else if (key.text == "vmc") z.components.push_back(parseVmc());
            else fail(key, "unknown key '" + key.text + "' in zone");
        }
        result_.description.zones.push_back(std::move(z));
        context_ = "file";
    }

    void parseInterAmbiance() {
        InterAmbiance ia;
        ia.id = namedHeader("the inter_ambiance id");
        const std::string iaId = ia.id;
        expect(Tok::LBrace, "'{'");
        while (!accept(Tok::RBrace)) {
            const Token key = expect(Tok::Ident, "an inter_ambiance key or '}'");
            context_ = iaId;
            if (key.text == "zone_a") {
                expect(Tok::Equals, "'='");
                ia.zoneA = expect(Tok::Str, "a zone id").text;
            } else if (key.text == "zone_b") {
                expect(Tok::Equals, "'='");
                ia.zoneB = expect(Tok::Str, "a zone id or \"EXTERIOR\"").text;
            } else if (key.text == "wall") {
                ia.components.push_back(parseWall(ComponentKind::SeparationWall, false, true));
            } else if (key.text == "wall_on_ground" || key.text == "slab_on_grade" ||
                       key.text == "crawl_space_wall") {
                ia.components.push_back(parseWall(ComponentKind::SeparationWall, true, true));
            } else if (key.text == "glazing") {
                ia.components.push_back(parseGlazing());
            } else if (key.text == "crack") {
                ia.components.push_back(parseCrack(ComponentKind::SmallOpening, 0.65));
            } else if (key.text == "vent") {
                ia.components.push_back(parseCrack(ComponentKind::Vent, 0.5));
            } else if (key.text == "large_opening") {
                ia.components.push_back(parseLargeOpening());
            } else if (key.text == "known_flow") {
                ia.components.push_back(parseKnownFlow());
            } else {
                fail(key, "unknown key '" + key.text + "' in inter_ambiance");
            }
        }
        result_.description.interAmbiances.push_back(std::move(ia));
        context_ = "file";
    }

    void parseOutputs() {
        expect(Tok::LBrace, "'{'");
        while (!accept(Tok::RBrace)) {
            const Token t = expect(Tok::Ident, "'report' or '}'");
            if (t.text != "report") fail(t, "expected 'report \"entity\" variable'");
            OutputRequest r;
            r.entityId = expect(Tok::Str, "an entity id").text;
            const Token v = expect(Tok::Ident, "an output variable");
            if (!outputVariableFromName(v.text, r.variable))
                fail(v, "unknown output variable '" + v.text + "'");
            result_.description.outputs.push_back(std::move(r));
        }
    }
};

// ---- serialization -------------------------------------------------------

std::string formatDouble(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    out += '"';
    return out;
}

std::string formatSchedule(const Schedule& s) {
    if (s.values.size() == 1) return formatDouble(s.values[0]);
    std::string out = "hourly(";
    for (size_t i = 0; i < s.values.size(); ++i) {
        if (i) out += ", ";
        out += formatDouble(s.values[i]);
    }
    out += ')';
    return out;
}

void writeFilm(std::string& out, const std::string& ind, const FilmCoefficients& f) {
    out += ind + "film { conv_interior = " + formatDouble(f.convInterior) +
           " rad_interior = " + formatDouble(f.radInterior) +
           " conv_exterior = " + formatDouble(f.convExterior) +
           " rad_exterior = " + formatDouble(f.radExterior) + " }\n";
}

void writeWall(std::string& out, const std::string& ind, const Component& c, bool oriented) {
    const WallParams& w = std::get<WallParams>(c.params);
    const char* keyword = c.kind == ComponentKind::InternalWall
                              ? "internal_wall"
                              : (w.groundContact ? "wall_on_ground" : "wall");
    out += ind + keyword + " " + quote(c.id) + " {\n";
    const std::string in2 = ind + "  ";
    out += in2 + "area = " + formatDouble(c.geometry.area) + "\n";
    if (oriented) {
        out += in2 + "azimuth = " + formatDouble(c.geometry.azimuth) + "\n";
        out += in2 + "tilt = " + formatDouble(c.geometry.tilt) + "\n";
    }
    if (w.groundContact && w.farSideTemperature)
        out += in2 + "far_side_temperature = " + formatDouble(*w.farSideTemperature) + "\n";
    out += in2 + "layers {\n";
    for (const Layer& l : w.layers)
        out += in2 + "  layer(" + formatDouble(l.conductivity) + ", " + formatDouble(l.density) +
               ", " + formatDouble(l.specificHeat) + ", " + formatDouble(l.thickness) + ")\n";
    out += in2 + "}\n";
    out += in2 + "surface_interior { absorptance = " +
           formatDouble(w.surfaceInterior.shortwaveAbsorptance) +
           " emissivity = " + formatDouble(w.surfaceInterior.longwaveEmissivity) + " }\n";
    out += in2 + "surface_exterior { absorptance = " +
           formatDouble(w.surfaceExterior.shortwaveAbsorptance) +
           " emissivity = " + formatDouble(w.surfaceExterior.longwaveEmissivity) + " }\n";
    out += in2 + "model { conduction = " +
           (w.model.conduction == ConductionModel::R2C ? "r2c" : "fd1d") +
           " nodes_per_layer = " + std::to_string(w.model.nodesPerLayer) + " longwave = " +
           (w.model.longwaveInterior == LongwaveInteriorModel::RadiantMeanNode ? "radiant_mean"
                                                                               : "none") +
           " }\n";
    writeFilm(out, in2, w.film);
    out += ind + "}\n";
}

void writeComponent(std::string& out, const std::string& ind, const Component& c) {
    switch (c.kind) {
    case ComponentKind::InternalWall:
        writeWall(out, ind, c, false);
        break;
    case ComponentKind::SeparationWall:
        writeWall(out, ind, c, true);
        break;
    case ComponentKind::Glazing: {
        const GlazingParams& g = std::get<GlazingParams>(c.params);
        out += ind + "glazing " + quote(c.id) + " {\n";
        const std::string in2 = ind + "  ";
        out += in2 + "area = " + formatDouble(c.geometry.area) + "\n";
        out += in2 + "azimuth = " + formatDouble(c.geometry.azimuth) + "\n";
        out += in2 + "tilt = " + formatDouble(c.geometry.tilt) + "\n";
        out += in2 + "u_value = " + formatDouble(g.uValue) + "\n";
        out += in2 + "transmittance = " + formatDouble(g.shortwaveTransmittance) + "\n";
        writeFilm(out, in2, g.film);
        out += ind + "}\n";
        break;
    }
    case ComponentKind::SmallOpening:
    case ComponentKind::Vent: {
        const CrackParams& p = std::get<CrackParams>(c.params);
        out += ind + (c.kind == ComponentKind::Vent ? "vent " : "crack ") + quote(c.id) +
               " { elevation = " + formatDouble(c.geometry.elevation) +
               " azimuth = " + formatDouble(c.geometry.azimuth) +
               " coefficient = " + formatDouble(p.flowCoefficient) +
               " exponent = " + formatDouble(p.flowExponent) + " }\n";
        break;
    }
    case ComponentKind::LargeOpening: {
        const LargeOpeningParams& p = std::get<LargeOpeningParams>(c.params);
        out += ind + "large_opening " + quote(c.id) +
               " { elevation = " + formatDouble(c.geometry.elevation) +
               " azimuth = " + formatDouble(c.geometry.azimuth) +
               " width = " + formatDouble(p.width) + " height = " + formatDouble(p.height) +
               " cd = " + formatDouble(p.dischargeCoefficient) + " }\n";
        break;
    }
    case ComponentKind::KnownFlow: {
        const KnownFlowParams& p = std::get<KnownFlowParams>(c.params);
        out += ind + "known_flow " + quote(c.id) + " { flow = " + formatSchedule(p.massFlow) +
               " }\n";
        break;
    }
    case ComponentKind::IdealAirHandler: {
        const IdealAirHandlerParams& p = std::get<IdealAirHandlerParams>(c.params);
        out += ind + "air_handler " + quote(c.id) + " { setpoint = " + formatDouble(p.setpoint) +
               " max_power = " + formatDouble(p.maxPower) + " }\n";
        break;
    }
    case ComponentKind::InternalLoad: {
        const InternalLoadParams& p = std::get<InternalLoadParams>(c.params);
        out += ind + "internal_load " + quote(c.id) + " { power = " + formatSchedule(p.power) +
               " }\n";
        break;
    }
    case ComponentKind::VmcExtract: {
        const VmcParams& p = std::get<VmcParams>(c.params);
        out += ind + "vmc " + quote(c.id) + " { flow = " + formatSchedule(p.extractFlow) + " }\n";
        break;
    }
    }
}

} // namespace

BuildingParseResult parseBuilding(std::string_view text) { return Parser(text).run(); }

std::string serializeBuilding(const BuildingDescription& d) {
    std::string out(kBuildingMagic);
    out += "\nbuilding " + quote(d.name) + " {\n";
    out += std::string("  simulation = ") + simulationTypeName(d.simulationType) + "\n";
    out += "  site { latitude = " + formatDouble(d.site.latitude) +
           " longitude = " + formatDouble(d.site.longitude) +
           " meridian = " + formatDouble(d.site.meridian) +
           " sky_temp_offset = " + formatDouble(d.site.skyTempOffset) + " }\n";
    out += std::string("  coupling { mode = ") +
           (d.coupling.thermalAirflowCoupling == CouplingMode::Iterative ? "iterative" : "one_way") +
           " max_iterations = " + std::to_string(d.coupling.maxCouplingIterations) +
           " air_temp_tolerance = " + formatDouble(d.coupling.airTempTolerance) +
           " flow_tolerance = " + formatDouble(d.coupling.flowTolerance) + " }\n";
    if (!d.cpTable.empty()) {
        out += "  cp_table {\n";
        for (const CpSector& s : d.cpTable)
            out += "    sector(" + formatDouble(s.fromDeg) + ", " + formatDouble(s.toDeg) + ", " +
                   formatDouble(s.cp) + ")\n";
        out += "  }\n";
    }
    for (const Zone& z : d.zones) {
        out += "  zone " + quote(z.id) + " {\n";
        out += "    air_volume = " + formatDouble(z.airVolume) + "\n";
        out += "    reference_height = " + formatDouble(z.referenceHeight) + "\n";
        out += "    moisture_gain = " + formatSchedule(z.internalMoistureGain) + "\n";
        out += std::string("    buffer { enabled = ") + (z.buffer.enabled ? "true" : "false") +
               " mass = " + formatDouble(z.buffer.mass) +
               " exchange = " + formatDouble(z.buffer.exchangeCoefficient) + " }\n";
        for (const Component& c : z.components) writeComponent(out, "    ", c);
        out += "  }\n";
    }
    for (const InterAmbiance& ia : d.interAmbiances) {
        out += "  inter_ambiance " + quote(ia.id) + " {\n";
        out += "    zone_a = " + quote(ia.zoneA) + "\n";
        out += "    zone_b = " + quote(ia.zoneB) + "\n";
        for (const Component& c : ia.components) writeComponent(out, "    ", c);
        out += "  }\n";
    }
    if (!d.outputs.empty()) {
        out += "  outputs {\n";
        for (const OutputRequest& r : d.outputs)
            out += "    report " + quote(r.entityId) + " " + outputVariableName(r.variable) + "\n";
        out += "  }\n";
    }
    out += "}\n";
    return out;
}

} // namespace codasim
