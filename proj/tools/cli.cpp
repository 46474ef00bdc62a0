#include "cli.hpp"

#include "pdrc/explicit.hpp"
#include "pdrc/generators.hpp"
#include "pdrc/io.hpp"
#include "pdrc/supervisor.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

namespace pdrc::cli
{
namespace
{

using json = nlohmann::ordered_json;

// Largest controlled state space explored to flag redundant guards.
constexpr std::size_t redundancy_limit = 100'000;

// Bad command line, unreadable file, or a model that does not validate.
struct input_error : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

struct config
{
    std::string model;
    std::string out;
    std::string certificate;
    std::string report;
    std::string run_log;
    std::string counterexample;
    std::string dimacs;
    std::string family;
    std::string params;
    long max_frames = 0;   // 0: unlimited
    long max_conflicts = -1;
    double max_seconds = -1;
    bool no_ind_gen = false;
    bool debug_invariants = false;
    bool oracle_check = false;
    std::uint64_t seed = 0;
    bool seed_given = false;
    long count = 1;
};

struct named_system
{
    std::string name;
    model::system sys;
};

std::pair< int, int > parse_pair( std::string_view text )
{
    const auto comma = text.find( ',' );
    if ( comma == std::string_view::npos )
        throw input_error( "expected n,k but got '" + std::string{ text } + "'" );
    auto number = [ & ]( std::string_view s ) {
        int v = 0;
        const auto [ p, ec ] = std::from_chars( s.data(), s.data() + s.size(), v );
        if ( ec != std::errc{} || p != s.data() + s.size() )
            throw input_error( "not an integer: '" + std::string{ s } + "'" );
        return v;
    };
    return { number( text.substr( 0, comma ) ), number( text.substr( comma + 1 ) ) };
}

named_system generate( std::string family, std::string_view params )
{
    std::transform( family.begin(), family.end(), family.begin(), []( unsigned char c ) { return std::tolower( c ); } );
    if ( family == "fig1" )
        return { "fig1", generators::fig1() };
    if ( family == "random" )
    {
        std::uint64_t seed = 0;
        const auto [ p, ec ] = std::from_chars( params.data(), params.data() + params.size(), seed );
        if ( ec != std::errc{} || p != params.data() + params.size() )
            throw input_error( "random needs a numeric seed" );
        return { "random:" + std::string{ params }, generators::random_system( seed ) };
    }
    const auto [ n, k ] = parse_pair( params );
    try
    {
        if ( family == "edp" )
            return { "EDP(" + std::to_string( n ) + "," + std::to_string( k ) + ")", generators::edp( n, k ) };
        if ( family == "cmt" )
            return { "CMT(" + std::to_string( n ) + "," + std::to_string( k ) + ")", generators::cmt( n, k ) };
    }
    catch ( const generators::parameter_error& e )
    {
        throw input_error( e.what() );
    }
    throw input_error( "unknown family '" + family + "'" );
}

// `fig1`, `edp:n,k`, `cmt:n,k`, `random:seed`, or a model file.
named_system load_model( const std::string& spec )
{
    if ( spec.empty() )
        throw input_error( "--model is required" );
    if ( spec == "fig1" )
        return generate( spec, "" );
    const auto colon = spec.find( ':' );
    if ( colon != std::string::npos )
    {
        const auto family = spec.substr( 0, colon );
        if ( family == "edp" || family == "cmt" || family == "random" )
            return generate( family, std::string_view{ spec }.substr( colon + 1 ) );
    }
    try
    {
        return { spec, io::read_model_file( spec ) };
    }
    catch ( const std::exception& e )
    {
        throw input_error( e.what() );
    }
}

encoding::symbolic_system encode_checked( const model::system& sys )
{
    try
    {
        return encoding::encode( sys );
    }
    catch ( const model::model_error& e )
    {
        throw input_error( e.what() );
    }
    catch ( const encoding::capacity_error& e )
    {
        throw input_error( e.what() );
    }
}

void write_text( const std::string& path, const std::string& text )
{
    std::ofstream f( path, std::ios::binary );
    if ( !f || !( f << text ) )
        throw input_error( "cannot write " + path );
}

void check_config( const config& cfg )
{
    if ( cfg.max_frames < 0 )
        throw input_error( "--max-frames must be positive" );
    if ( cfg.max_conflicts < -1 )
        throw input_error( "--max-conflicts must not be negative" );
    if ( cfg.count < 1 )
        throw input_error( "--count must be positive" );
    std::vector< std::string > paths;
    for ( const auto* p : { &cfg.out, &cfg.certificate, &cfg.report, &cfg.run_log, &cfg.counterexample, &cfg.dimacs } )
        if ( !p->empty() )
            paths.push_back( *p );
    std::sort( paths.begin(), paths.end() );
    if ( std::adjacent_find( paths.begin(), paths.end() ) != paths.end() )
        throw input_error( "output paths must be distinct" );
}

options engine_options( const config& cfg, std::ostream* log )
{
    options o;
    o.inductive_generalization = !cfg.no_ind_gen;
    o.debug_invariants = cfg.debug_invariants;
    if ( cfg.max_frames > 0 )
        o.max_frames = static_cast< std::size_t >( cfg.max_frames );
    o.max_conflicts = cfg.max_conflicts;
    if ( cfg.max_seconds >= 0 )
        o.max_seconds = cfg.max_seconds;
    o.run_log = log;
    return o;
}

const char* verdict_name( const synthesis_result& r )
{
    if ( std::holds_alternative< controlled >( r ) )
        return "controlled";
    if ( std::holds_alternative< uncontrollable >( r ) )
        return "uncontrollable";
    return "inconclusive";
}

int verdict_code( const synthesis_result& r )
{
    if ( std::holds_alternative< controlled >( r ) )
        return exit_controlled;
    if ( std::holds_alternative< uncontrollable >( r ) )
        return exit_uncontrollable;
    return exit_budget;
}

const run_stats& stats_of( const synthesis_result& r )
{
    return std::visit( []( const auto& x ) -> const run_stats& { return x.stats; }, r );
}

json stats_json( const run_stats& s )
{
    return { { "frames", s.frames },
             { "iterations", s.iterations },
             { "clauses_learned", s.clauses_learned },
             { "supervisor_cubes", s.supervisor_cubes },
             { "propagated", s.propagated },
             { "solver_calls", s.solver_calls },
             { "conflicts", s.conflicts } };
}

json counterexample_json( const model::system& sys, const counterexample& cex )
{
    json states = json::array();
    json events = json::array();
    for ( const auto& s : cex.states )
        states.push_back( model::to_string( sys, s ) );
    for ( const auto e : cex.events )
        events.push_back( sys.events[ e ].name );
    return { { "states", states }, { "events", events } };
}

std::string counterexample_text( const model::system& sys, const counterexample& cex )
{
    std::ostringstream os;
    for ( std::size_t i = 0; i < cex.states.size(); ++i )
    {
        os << model::to_string( sys, cex.states[ i ] ) << '\n';
        if ( i < cex.events.size() )
            os << "  --" << sys.events[ cex.events[ i ] ].name << "-->\n";
    }
    return os.str();
}

std::string seconds_text( double s )
{
    std::ostringstream os;
    os << std::fixed << std::setprecision( 3 ) << s;
    return os.str();
}

struct timed_result
{
    synthesis_result result;
    double seconds;
};

timed_result timed_synthesize( const encoding::symbolic_system& sym, const options& o )
{
    const auto start = std::chrono::steady_clock::now();
    auto r = synthesize( sym, o );
    return { std::move( r ), std::chrono::duration< double >( std::chrono::steady_clock::now() - start ).count() };
}

json oracle_json( const oracle::comparison& cmp )
{
    return { { "ok", cmp.ok() },
             { "verdicts_agree", cmp.verdicts_agree },
             { "reachable_equal", cmp.reachable_equal },
             { "safe", cmp.safe },
             { "counterexample_replays", cmp.counterexample_replays },
             { "findings", cmp.findings } };
}

oracle::comparison cross_check( const encoding::symbolic_system& sym, const synthesis_result& r )
{
    try
    {
        const auto rw = oracle::rw_synthesize( sym.source );
        return oracle::compare( sym, r, rw );
    }
    catch ( const oracle::limit_exceeded& e )
    {
        throw input_error( std::string{ "oracle: " } + e.what() );
    }
}

// ---- synth ------------------------------------------------------------

int cmd_synth( const config& cfg, std::ostream& out )
{
    const auto model = load_model( cfg.model );
    const auto sym = encode_checked( model.sys );

    std::ofstream log_file;
    if ( !cfg.run_log.empty() )
    {
        log_file.open( cfg.run_log, std::ios::binary );
        if ( !log_file )
            throw input_error( "cannot write " + cfg.run_log );
    }
    const auto run = timed_synthesize( sym, engine_options( cfg, cfg.run_log.empty() ? nullptr : &log_file ) );
    const auto& r = run.result;
    int code = verdict_code( r );

    json report;
    report[ "model" ] = model.name;
    report[ "verdict" ] = verdict_name( r );
    report[ "stats" ] = stats_json( stats_of( r ) );

    if ( const auto* c = std::get_if< controlled >( &r ) )
    {
        const auto ex = extract_guards( sym, c->sup );
        // Guards that never bite on a reachable state are reported, not pruned.
        std::optional< std::vector< bool > > redundant;
        try
        {
            redundant = oracle::redundant_strengthenings( model.sys, ex, redundancy_limit );
        }
        catch ( const oracle::limit_exceeded& )
        {
        }
        json changes = json::array();
        for ( std::size_t i = 0; i < ex.strengthenings.size(); ++i )
        {
            const auto& s = ex.strengthenings[ i ];
            changes.push_back( { { "automaton", s.automaton },
                                 { "transition", s.transition },
                                 { "from", s.from },
                                 { "event", s.event },
                                 { "added", model::to_string( s.added ) },
                                 { "frame", s.frame } } );
            changes.back()[ "redundant" ] = redundant ? json( ( *redundant )[ i ] ) : json();
        }
        report[ "fixpoint_frame" ] = c->fixpoint_frame;
        report[ "strengthenings" ] = changes;
        const auto certificate = io::write_certificate( sym, c->invariant );
        report[ "invariant" ] = json::parse( certificate )[ "clauses" ];

        // The certificate must hold on the model we are about to write.
        const auto resealed = encoding::encode( ex.controlled );
        const auto verdict = check_certificate( resealed, io::parse_certificate( resealed, certificate ) );
        if ( !verdict.passed() )
            throw invariant_violation( "emitted certificate fails on the controlled model" );

        if ( !cfg.out.empty() )
            write_text( cfg.out, io::write_model( ex.controlled ) );
        if ( !cfg.certificate.empty() )
            write_text( cfg.certificate, certificate );

        out << "controlled: " << changes.size() << " guard strengthening(s)\n";
        for ( std::size_t i = 0; i < ex.strengthenings.size(); ++i )
        {
            const auto& s = ex.strengthenings[ i ];
            out << "  " << s.automaton << " " << s.from << " -" << s.event << "-> : && (" << model::to_string( s.added )
                << ")  [frame " << s.frame << ( redundant && ( *redundant )[ i ] ? ", redundant" : "" ) << "]\n";
        }
    }
    else if ( const auto* u = std::get_if< uncontrollable >( &r ) )
    {
        report[ "counterexample" ] = counterexample_json( model.sys, u->path );
        const auto text = counterexample_text( model.sys, u->path );
        const auto& trace_path = cfg.counterexample.empty() ? cfg.out : cfg.counterexample;
        if ( !trace_path.empty() )
            write_text( trace_path, text );
        out << "uncontrollable: " << u->path.events.size() << " uncontrollable step(s) to a forbidden state\n" << text;
    }
    else
    {
        const auto& i = std::get< inconclusive >( r );
        report[ "reason" ] = i.reason;
        out << "inconclusive: " << i.reason << '\n';
    }

    if ( cfg.oracle_check )
    {
        const auto cmp = cross_check( sym, r );
        report[ "oracle" ] = oracle_json( cmp );
        out << "oracle: " << ( cmp.ok() ? "agrees" : "MISMATCH" ) << '\n';
        for ( const auto& f : cmp.findings )
            out << "  " << f << '\n';
        if ( !cmp.ok() && !std::holds_alternative< inconclusive >( r ) )
            code = exit_mismatch;
    }

    const auto& st = stats_of( r );
    out << "frames " << st.frames << "  clauses " << st.clauses_learned << "  supervisor-cubes " << st.supervisor_cubes
        << "  solver-calls " << st.solver_calls << "  time " << seconds_text( run.seconds ) << " s\n";
    if ( !cfg.report.empty() )
        write_text( cfg.report, report.dump( 2 ) + "\n" );
    return code;
}

// ---- verify -----------------------------------------------------------

int cmd_verify( const config& cfg, std::ostream& out )
{
    const auto model = load_model( cfg.model );
    const auto sym = encode_checked( model.sys );
    if ( cfg.certificate.empty() )
        throw input_error( "--certificate is required" );
    std::string text;
    try
    {
        text = io::read_file( cfg.certificate );
    }
    catch ( const std::exception& e )
    {
        throw input_error( e.what() );
    }

    json report;
    report[ "model" ] = model.name;
    std::vector< clause > invariant;
    try
    {
        invariant = io::parse_certificate( sym, text );
    }
    catch ( const std::exception& e )
    {
        out << "certificate rejected: " << e.what() << '\n';
        report[ "passed" ] = false;
        report[ "error" ] = e.what();
        if ( !cfg.report.empty() )
            write_text( cfg.report, report.dump( 2 ) + "\n" );
        return exit_certificate_invalid;
    }

    const auto verdict = check_certificate( sym, invariant );
    json checks = json::array();
    for ( const auto& c : verdict.checks )
    {
        out << c.name << ": " << ( c.passed ? "pass" : "FAIL" );
        if ( !c.passed )
            out << "  (" << c.witness << ")";
        out << '\n';
        checks.push_back( { { "name", c.name }, { "passed", c.passed }, { "witness", c.witness } } );
    }
    report[ "passed" ] = verdict.passed();
    report[ "checks" ] = checks;
    if ( !cfg.report.empty() )
        write_text( cfg.report, report.dump( 2 ) + "\n" );
    return verdict.passed() ? exit_controlled : exit_certificate_invalid;
}

// ---- oracle -----------------------------------------------------------

int cmd_oracle( const config& cfg, std::ostream& out )
{
    std::vector< std::function< named_system() > > instances;
    if ( !cfg.model.empty() )
        instances.push_back( [ & ] { return load_model( cfg.model ); } );
    else if ( cfg.seed_given )
        for ( long i = 0; i < cfg.count; ++i )
        {
            const auto seed = cfg.seed + static_cast< std::uint64_t >( i );
            instances.push_back( [ seed ] { return generate( "random", std::to_string( seed ) ); } );
        }
    else
        throw input_error( "oracle needs --model or --seed" );

    json rows = json::array();
    std::size_t agree = 0, mismatches = 0, inconclusive_runs = 0;
    for ( const auto& make : instances )
    {
        const auto model = make();
        const auto sym = encode_checked( model.sys );
        const auto r = synthesize( sym, engine_options( cfg, nullptr ) );
        const auto cmp = cross_check( sym, r );
        const bool undecided = std::holds_alternative< inconclusive >( r );
        if ( cmp.ok() )
            ++agree;
        else if ( undecided )
            ++inconclusive_runs;
        else
            ++mismatches;
        if ( instances.size() == 1 || !cmp.ok() )
        {
            out << model.name << ": " << verdict_name( r ) << ", oracle " << ( cmp.ok() ? "agrees" : "MISMATCH" ) << '\n';
            for ( const auto& f : cmp.findings )
                out << "  " << f << '\n';
        }
        json row = { { "model", model.name }, { "verdict", verdict_name( r ) } };
        row[ "oracle" ] = oracle_json( cmp );
        rows.push_back( row );
    }
    out << agree << "/" << instances.size() << " agree";
    if ( inconclusive_runs )
        out << ", " << inconclusive_runs << " inconclusive";
    out << '\n';
    if ( !cfg.report.empty() )
        write_text( cfg.report, json{ { "instances", rows }, { "agree", agree }, { "mismatches", mismatches } }.dump( 2 ) + "\n" );
    if ( mismatches )
        return exit_mismatch;
    return inconclusive_runs ? exit_budget : exit_controlled;
}

// ---- bench ------------------------------------------------------------

int cmd_bench( const config& cfg, std::ostream& out )
{
    const auto model = cfg.model.empty() ? generate( cfg.family.empty() ? "fig1" : cfg.family, cfg.params ) : load_model( cfg.model );
    const auto sym = encode_checked( model.sys );
    const auto run = timed_synthesize( sym, engine_options( cfg, nullptr ) );
    const auto& st = stats_of( run.result );
    out << "model\ttime[s]\tverdict\tframes\tclauses\tsupervisor-cubes\tsolver-calls\n";
    out << model.name << '\t' << seconds_text( run.seconds ) << '\t' << verdict_name( run.result ) << '\t' << st.frames
        << '\t' << st.clauses_learned << '\t' << st.supervisor_cubes << '\t' << st.solver_calls << '\n';
    int code = verdict_code( run.result );
    if ( cfg.oracle_check )
    {
        const auto cmp = cross_check( sym, run.result );
        out << "oracle: " << ( cmp.ok() ? "agrees" : "MISMATCH" ) << '\n';
        for ( const auto& f : cmp.findings )
            out << "  " << f << '\n';
        if ( !cmp.ok() && !std::holds_alternative< inconclusive >( run.result ) )
            code = exit_mismatch;
    }
    return code;
}

// ---- export -----------------------------------------------------------

int cmd_export( const config& cfg, std::ostream& out )
{
    const auto model = load_model( cfg.model );
    const auto text = io::write_model( model.sys );
    if ( cfg.out.empty() )
        out << text;
    else
        write_text( cfg.out, text );
    if ( !cfg.dimacs.empty() )
    {
        const auto sym = encode_checked( model.sys );
        sat::solver s;
        sym.load( s );
        std::ostringstream cnf;
        s.write_dimacs( cnf );
        write_text( cfg.dimacs, cnf.str() );
    }
    return exit_controlled;
}

} // namespace

int run( const std::vector< std::string >& args, std::ostream& out, std::ostream& err )
{
    CLI::App app{ "Safe supervisor synthesis for extended finite state machines" };
    app.require_subcommand( 1 );
    config cfg;

    auto model_opt = [ & ]( CLI::App* sub, const char* help ) {
        sub->add_option( "--model", cfg.model, help );
    };
    auto budget_opts = [ & ]( CLI::App* sub ) {
        sub->add_option( "--max-frames", cfg.max_frames, "Stop after this many frames" );
        sub->add_option( "--max-conflicts", cfg.max_conflicts, "Total SAT conflict budget" );
        sub->add_option( "--max-seconds", cfg.max_seconds, "Wall-clock budget" );
        sub->add_flag( "--no-ind-gen", cfg.no_ind_gen, "Disable inductive generalization" );
        sub->add_flag( "--debug-invariants", cfg.debug_invariants, "Audit the frame invariants after every phase" );
    };
    const char* model_help = "fig1, edp:n,k, cmt:n,k, random:seed, or a JSON model file";

    auto* synth = app.add_subcommand( "synth", "Synthesize a supervisor" );
    model_opt( synth, model_help );
    synth->add_option( "--out", cfg.out, "Controlled model (or counterexample trace when uncontrollable)" );
    synth->add_option( "--certificate", cfg.certificate, "Inductive invariant certificate" );
    synth->add_option( "--report", cfg.report, "JSON report" );
    synth->add_option( "--run-log", cfg.run_log, "NDJSON log of every solver query" );
    synth->add_option( "--counterexample", cfg.counterexample, "Counterexample trace file" );
    synth->add_flag( "--oracle-check", cfg.oracle_check, "Cross-check against the explicit synthesis" );
    budget_opts( synth );

    auto* verify = app.add_subcommand( "verify", "Check a certificate against a controlled model" );
    model_opt( verify, model_help );
    verify->add_option( "--certificate", cfg.certificate, "Certificate file" )->required();
    verify->add_option( "--report", cfg.report, "JSON report" );

    auto* orc = app.add_subcommand( "oracle", "Compare against the explicit synthesis" );
    model_opt( orc, model_help );
    orc->add_option( "--seed", cfg.seed, "First seed of a random sweep" )->each( [ & ]( const std::string& ) { cfg.seed_given = true; } );
    orc->add_option( "--count", cfg.count, "Number of random systems in the sweep" );
    orc->add_option( "--report", cfg.report, "JSON report" );
    budget_opts( orc );

    auto* bench = app.add_subcommand( "bench", "Time one benchmark instance" );
    model_opt( bench, model_help );
    bench->add_option( "--family", cfg.family, "edp, cmt or fig1" );
    bench->add_option( "--params", cfg.params, "n,k" );
    bench->add_flag( "--oracle-check", cfg.oracle_check, "Cross-check against the explicit synthesis" );
    budget_opts( bench );

    auto* exp = app.add_subcommand( "export", "Write a model as JSON, optionally its CNF" );
    model_opt( exp, model_help );
    exp->add_option( "--out", cfg.out, "Model file (default: stdout)" );
    exp->add_option( "--dimacs", cfg.dimacs, "DIMACS file of the symbolic encoding" );

    try
    {
        std::vector< std::string > reversed( args.rbegin(), args.rend() );
        app.parse( reversed );
    }
    catch ( const CLI::ParseError& e )
    {
        const int code = app.exit( e, out, err );
        return code == 0 ? 0 : exit_invalid_input;
    }

    try
    {
        check_config( cfg );
        if ( synth->parsed() )
            return cmd_synth( cfg, out );
        if ( verify->parsed() )
            return cmd_verify( cfg, out );
        if ( orc->parsed() )
            return cmd_oracle( cfg, out );
        if ( bench->parsed() )
            return cmd_bench( cfg, out );
        return cmd_export( cfg, out );
    }
    catch ( const input_error& e )
    {
        err << "error: " << e.what() << '\n';
        return exit_invalid_input;
    }
    catch ( const invariant_violation& e )
    {
        err << "internal invariant failure: " << e.what() << '\n';
        return exit_internal;
    }
    catch ( const extraction_error& e )
    {
        err << "internal invariant failure: " << e.what() << '\n';
        return exit_internal;
    }
    catch ( const std::exception& e )
    {
        err << "internal error: " << e.what() << '\n';
        return exit_internal;
    }
}

} // namespace pdrc::cli
