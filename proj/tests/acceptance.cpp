// Runs the eight acceptance criteria and prints one PASS/FAIL line each.
// Exit status is 0 only when every criterion passes.

#include "cli.hpp"
#include "support.hpp"

#include "pdrc/io.hpp"
#include "pdrc/supervisor.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

using namespace pdrc;
namespace fs = std::filesystem;

namespace
{

// Pinned tolerances.
constexpr double fig1_seconds = 1.0;
constexpr std::uint64_t random_suite_size = 500;
constexpr double random_suite_seconds = 120.0;
constexpr std::uint64_t encoding_suite_size = 100;
constexpr std::size_t encoding_state_limit = 10'000;
constexpr double audit_image_limit = 1'000;
constexpr double edp_5_10_seconds = 3.0;
constexpr double cmt_1_5_seconds = 9.0;
constexpr std::size_t mutation_count = 100;

struct verdict
{
    bool pass = true;
    std::ostringstream detail;

    void fail( const std::string& why )
    {
        if ( pass )
            detail << why;
        pass = false;
    }
};

class stopwatch
{
public:
    [[nodiscard]] double seconds() const
    {
        return std::chrono::duration< double >( std::chrono::steady_clock::now() - _start ).count();
    }

private:
    std::chrono::steady_clock::time_point _start = std::chrono::steady_clock::now();
};

std::string transition_text( const model::transition& t )
{
    std::string out = t.from + " " + t.event + " " + t.to + " [" + model::to_string( t.condition ) + "]";
    for ( const auto& u : t.updates )
        out += " " + u.var + "=" + model::update_rhs( u );
    return out;
}

std::vector< std::string > uncontrollable_text( const model::system& sys )
{
    std::vector< std::string > out;
    for ( const auto& a : sys.automata )
        for ( const auto& t : a.transitions )
            if ( !sys.events[ *sys.event_index( t.event ) ].controllable )
                out.push_back( a.name + ": " + transition_text( t ) );
    std::sort( out.begin(), out.end() );
    return out;
}

options without_ind_gen()
{
    options o;
    o.inductive_generalization = false;
    return o;
}

// Pair -> membership in the clause set, over every in-domain pair.
std::vector< bool > semantics_of( const encoding::symbolic_system& sym, const std::vector< clause >& cs )
{
    std::vector< bool > out;
    for ( const auto& p : testing::all_pairs( sym.source ) )
        out.push_back( encoding::satisfies( testing::bits_of( sym, p ), cs ) );
    return out;
}

// Initiation, consecution and safety checked state by state.
bool explicitly_inductive( const encoding::symbolic_system& sym, const std::vector< clause >& inv )
{
    const auto& sys = sym.source;
    const model::semantics sem{ sys };
    const auto in_inv = [ & ]( const testing::state_event& p ) {
        return encoding::satisfies( testing::bits_of( sym, p ), inv );
    };
    for ( const auto& p : testing::all_pairs( sys ) )
    {
        const auto bits = testing::bits_of( sym, p );
        const bool member = encoding::satisfies( bits, inv );
        if ( encoding::satisfies( bits, sym.init ) && !member )
            return false;
        if ( !member )
            continue;
        if ( sem.forbidden( p.state ) )
            return false;
        if ( const auto next = sem.enabled( p.state, p.event ) )
            for ( std::size_t e = 0; e < sys.events.size(); ++e )
                if ( !in_inv( { *next, e } ) )
                    return false;
    }
    return true;
}

// ---- 1 ---------------------------------------------------------------------

verdict fig1_guards()
{
    verdict v;
    stopwatch clock;
    const auto sys = generators::fig1();
    const auto sym = encoding::encode( sys );
    const auto r = synthesize( sym );
    const auto* c = std::get_if< controlled >( &r );
    if ( !c )
        return v.fail( "verdict is not controlled" ), std::move( v );
    const auto ex = extract_guards( sym, c->sup );
    const double elapsed = clock.seconds();

    std::set< std::pair< std::string, std::string > > where;
    const model::semantics sem{ sys };
    for ( const auto& s : ex.strengthenings )
    {
        where.insert( { s.from, s.event } );
        const int loc = s.from == "l1" ? 1 : s.from == "l2" ? 2 : -1;
        if ( loc < 0 )
            continue;
        for ( long x = 0; x <= 3; ++x )
            for ( long y = 0; y <= 3; ++y )
                if ( sem.holds( s.added, { { loc }, { x, y } } ) != ( y != 2 || x <= 2 ) )
                    v.fail( "guard on (" + s.from + ", " + s.event + ") differs at x=" + std::to_string( x ) +
                            ", y=" + std::to_string( y ) );
    }
    if ( ex.strengthenings.size() != 2 ||
         where != std::set< std::pair< std::string, std::string > >{ { "l1", "a" }, { "l2", "b" } } )
        v.fail( std::to_string( ex.strengthenings.size() ) + " strengthenings, expected (l1, a) and (l2, b)" );
    if ( uncontrollable_text( ex.controlled ) != uncontrollable_text( sys ) )
        v.fail( "an alpha/omega transition changed" );
    if ( elapsed >= fig1_seconds )
        v.fail( "took " + std::to_string( elapsed ) + " s" );
    if ( v.pass )
        v.detail << "2 strengthenings on (l1, a), (l2, b), each == y!=2 || x<=2 over x,y in [0,3]; " << std::fixed
                 << std::setprecision( 4 ) << elapsed << " s";
    return v;
}

// ---- 2 ---------------------------------------------------------------------

verdict fig1_certificate()
{
    verdict v;
    const auto sym = encoding::encode( generators::fig1() );
    engine e{ sym, without_ind_gen() };
    if ( e.initial_violation() )
        return v.fail( "initial state is forbidden" ), std::move( v );
    std::optional< std::size_t > fix;
    std::size_t iterations = 0;
    try
    {
        while ( !fix && iterations < 50 )
        {
            ++iterations;
            e.blocking_phase();
            e.propagate();
            fix = e.check_fixpoint();
            if ( !fix )
                e.advance();
        }
    }
    catch ( const engine::found_uncontrollable& )
    {
        return v.fail( "reported uncontrollable" ), std::move( v );
    }
    if ( !fix )
        return v.fail( "no fixpoint within 50 iterations" ), std::move( v );
    if ( e.frames()[ *fix ] != e.frames()[ *fix + 1 ] )
        v.fail( "fixpoint frames are not equal" );
    const std::vector< clause > inv( e.frames()[ *fix ].begin(), e.frames()[ *fix ].end() );

    // Reference: (!alpha || !l3 || y != 2 || x <= 2) && !l5.
    const auto& sys = sym.source;
    const auto alpha = *sys.event_index( "alpha" );
    std::size_t pairs = 0;
    for ( const auto& p : testing::all_pairs( sys ) )
    {
        const auto loc = p.state.locations[ 0 ];
        const auto x = p.state.values[ 0 ], y = p.state.values[ 1 ];
        const bool expected = ( p.event != alpha || loc != 3 || y != 2 || x <= 2 ) && loc != 5;
        if ( encoding::satisfies( testing::bits_of( sym, p ), inv ) != expected )
            v.fail( "invariant differs from the reference at a state" );
        ++pairs;
    }
    const auto cert = check_certificate( sym, inv, e.current_supervisor() );
    for ( const auto& c : cert.checks )
        if ( !c.passed )
            v.fail( c.name + " check failed" );

    // The production path must agree, with and without generalisation.
    const auto plain_result = synthesize( sym, without_ind_gen() );
    const auto* plain = std::get_if< controlled >( &plain_result );
    const auto general = synthesize( sym );
    if ( !plain || plain->invariant != inv )
        v.fail( "synthesize() differs from the step-driven run" );
    if ( const auto* g = std::get_if< controlled >( &general ); !g || !check_certificate( sym, g->invariant, g->sup ).passed() )
        v.fail( "certificate with inductive generalisation does not pass" );
    if ( iterations > 5 )
        v.fail( std::to_string( iterations ) + " iterations" );
    if ( v.pass )
        v.detail << "3/3 checks pass; equal to the reference on all " << pairs << " state-event pairs; F" << *fix
                 << " == F" << *fix + 1 << " after " << iterations << " iterations";
    return v;
}

// ---- 3 ---------------------------------------------------------------------

verdict differential_suite()
{
    verdict v;
    stopwatch clock;
    std::size_t verdicts = 0, reach = 0, replay = 0, safe = 0, nc = 0, nu = 0;
    for ( std::uint64_t seed = 0; seed < random_suite_size; ++seed )
    {
        const auto sys = generators::random_system( seed );
        const auto sym = encoding::encode( sys );
        const auto r = synthesize( sym );
        const auto cmp = oracle::compare( sym, r, oracle::rw_synthesize( sys ) );
        verdicts += cmp.verdicts_agree ? 0 : 1;
        reach += cmp.reachable_equal ? 0 : 1;
        replay += cmp.counterexample_replays ? 0 : 1;
        safe += cmp.safe ? 0 : 1;
        ( std::holds_alternative< controlled >( r ) ? nc : nu ) += 1;
        if ( !cmp.ok() && v.pass )
            v.fail( "seed " + std::to_string( seed ) + ": " + ( cmp.findings.empty() ? "mismatch" : cmp.findings.front() ) );
    }
    const double elapsed = clock.seconds();
    if ( elapsed >= random_suite_seconds )
        v.fail( "took " + std::to_string( elapsed ) + " s" );
    v.detail << ( v.pass ? "" : "; " ) << random_suite_size << " systems (" << nc << " controlled, " << nu
             << " uncontrollable); mismatches: verdict " << verdicts << ", reachable set " << reach << ", replay " << replay
             << ", safety " << safe << "; " << std::fixed << std::setprecision( 2 ) << elapsed << " s";
    return v;
}

// ---- 4 ---------------------------------------------------------------------

verdict cone_preservation()
{
    verdict v;
    std::vector< std::pair< std::string, model::system > > instances{
        { "fig1", generators::fig1() },      { "edp(2,1)", generators::edp( 2, 1 ) }, { "edp(3,2)", generators::edp( 3, 2 ) },
        { "edp(5,10)", generators::edp( 5, 10 ) }, { "cmt(1,1)", generators::cmt( 1, 1 ) }, { "cmt(1,5)", generators::cmt( 1, 5 ) },
        { "cmt(2,2)", generators::cmt( 2, 2 ) } };
    for ( std::uint64_t seed = 0; seed < random_suite_size; ++seed )
        instances.emplace_back( "random:" + std::to_string( seed ), generators::random_system( seed ) );

    std::size_t checked = 0, clauses = 0;
    for ( const auto& [ name, sys ] : instances )
        for ( bool gen : { true, false } )
        {
            const auto sym = encoding::encode( sys );
            const auto before = sym.trans_u;
            options o;
            o.inductive_generalization = gen;
            const auto r = synthesize( sym, o );
            if ( sym.trans_u != before )
                v.fail( name + ": T_u changed during synthesis" );
            const auto* c = std::get_if< controlled >( &r );
            if ( !c )
                continue;
            const auto ex = extract_guards( sym, c->sup );
            const auto after = encoding::encode( ex.controlled );
            if ( after.trans_u != sym.trans_u || after.ind_u != sym.ind_u )
                v.fail( name + ": re-encoded T_u differs" );
            if ( uncontrollable_text( ex.controlled ) != uncontrollable_text( sys ) )
                v.fail( name + ": an uncontrollable EFSM transition changed" );
            ++checked;
            clauses += sym.trans_u.size();
        }
    if ( v.pass )
        v.detail << checked << " controlled runs: T_u identical (" << clauses
                 << " clauses in total) and uncontrollable transitions unchanged";
    return v;
}

// ---- 5 ---------------------------------------------------------------------

verdict encoding_equivalence()
{
    verdict v;
    std::size_t systems = 0, pairs = 0, queries = 0;
    for ( std::uint64_t seed = 0; systems < encoding_suite_size; ++seed )
    {
        const auto sys = generators::random_system( 10'000 + seed );
        const model::semantics sem{ sys };
        if ( sem.state_count() > encoding_state_limit )
            continue;
        ++systems;
        const auto sym = encoding::encode( sys );
        sat::solver s;
        sym.load( s );
        for ( const auto& p : testing::all_pairs( sys ) )
        {
            const auto expected = sem.enabled( p.state, p.event );
            const auto got = testing::symbolic_successors( s, sym, p );
            if ( got.size() != ( expected ? 1u : 0u ) || ( expected && got.front() != *expected ) )
                v.fail( "seed " + std::to_string( 10'000 + seed ) + ": successor mismatch" );
            ++pairs;
        }
        // Invariant preservation, from the cones and definitions alone.
        sat::solver bare;
        bare.reserve_vars( sym.num_vars );
        for ( const auto* part : { &sym.definitions, &sym.trans_c, &sym.trans_u } )
            for ( const auto& c : *part )
                bare.add_clause( c );
        for ( const auto& c : sym.invariant() )
            bare.add_clause( c );
        for ( const auto& c : sym.primed( sym.state_invariant ) )
        {
            auto as = sat::negate( c ).lits;
            as.push_back( sym.ind_any );
            if ( bare.solve( std::span< const sat::lit >{ as } ) != sat::status::unsatisfiable )
                v.fail( "seed " + std::to_string( 10'000 + seed ) + ": invariant not preserved" );
            ++queries;
        }
    }
    if ( v.pass )
        v.detail << systems << " systems, " << pairs << " state-event pairs equal to `enabled`; " << queries
                 << " preservation queries UNSAT";
    return v;
}

// ---- 6 ---------------------------------------------------------------------

verdict trace_audit()
{
    verdict v;
    std::size_t runs = 0;
    for ( std::uint64_t seed = 0; seed < random_suite_size; ++seed )
    {
        const auto sym = encoding::encode( generators::random_system( seed ) );
        for ( bool gen : { true, false } )
        {
            options o;
            o.debug_invariants = true;
            o.explicit_check_limit = audit_image_limit;
            o.inductive_generalization = gen;
            try
            {
                synthesize( sym, o );
                ++runs;
            }
            catch ( const invariant_violation& e )
            {
                v.fail( "seed " + std::to_string( seed ) + ": " + e.what() );
            }
        }
    }
    if ( v.pass )
        v.detail << runs << " audited runs (" << random_suite_size
                 << " systems, generalisation on and off), zero violations";
    return v;
}

// ---- 7 ---------------------------------------------------------------------

verdict benchmarks()
{
    verdict v;
    const auto timed = [ & ]( const std::string& name, const model::system& sys, double limit ) {
        stopwatch clock;
        const auto r = synthesize( encoding::encode( sys ) );
        const double t = clock.seconds();
        if ( !std::holds_alternative< controlled >( r ) )
            v.fail( name + " is not controlled" );
        if ( t >= limit )
            v.fail( name + " took " + std::to_string( t ) + " s" );
        v.detail << name << " controlled in " << std::fixed << std::setprecision( 3 ) << t << " s; ";
    };
    timed( "EDP(5,10)", generators::edp( 5, 10 ), edp_5_10_seconds );
    timed( "CMT(1,5)", generators::cmt( 1, 5 ), cmt_1_5_seconds );
    for ( const auto& [ name, sys ] : { std::pair{ "EDP(2,1)", generators::edp( 2, 1 ) }, std::pair{ "CMT(1,1)", generators::cmt( 1, 1 ) } } )
    {
        const auto sym = encoding::encode( sys );
        const auto cmp = oracle::compare( sym, synthesize( sym ), oracle::rw_synthesize( sys ) );
        if ( !cmp.ok() )
            v.fail( std::string( name ) + " disagrees with the oracle" );
    }
    if ( v.pass )
        v.detail << "EDP(2,1) and CMT(1,1) agree with the oracle";
    return v;
}

// ---- 8 ---------------------------------------------------------------------

struct certified_instance
{
    std::string name;
    fs::path model_file;
    encoding::symbolic_system sym;   // of the controlled model
    std::vector< clause > invariant;
};

int cli( const std::vector< std::string >& args )
{
    std::ostringstream out, err;
    return cli::run( args, out, err );
}

verdict certificate_robustness()
{
    verdict v;
    const auto dir = fs::temp_directory_path() / "pdrc_acceptance";
    fs::create_directories( dir );

    // Valid certificates, produced and re-read through the command line.
    std::vector< certified_instance > pool;
    std::vector< std::pair< std::string, std::vector< std::string > > > sources{
        { "fig1", { "--no-ind-gen" } }, { "fig1", {} }, { "edp:2,1", {} }, { "edp:3,1", { "--no-ind-gen" } },
        { "cmt:1,1", {} }, { "cmt:1,2", { "--no-ind-gen" } } };
    for ( std::uint64_t seed = 0; seed < 200; ++seed )
        sources.push_back( { "random:" + std::to_string( seed ), { "--no-ind-gen" } } );
    for ( const auto& [ spec, extra ] : sources )
    {
        const auto tag = std::to_string( pool.size() );
        const auto model = dir / ( "controlled_" + tag + ".json" );
        const auto cert = dir / ( "certificate_" + tag + ".json" );
        std::vector< std::string > args{ "synth", "--model", spec, "--out", model.string(), "--certificate", cert.string() };
        args.insert( args.end(), extra.begin(), extra.end() );
        if ( cli( args ) != cli::exit_controlled )
            continue;
        auto sym = encoding::encode( io::read_model_file( model ) );
        auto inv = io::parse_certificate( sym, io::read_file( cert ) );
        if ( inv.empty() )
            continue;
        if ( cli( { "verify", "--model", model.string(), "--certificate", cert.string() } ) != cli::exit_controlled )
            v.fail( spec + ": the unmutated certificate is rejected" );
        pool.push_back( { spec, model, std::move( sym ), std::move( inv ) } );
    }

    // Single-clause deletions first, then seeded random multi-clause deletions.
    std::vector< std::pair< std::size_t, std::vector< std::size_t > > > mutations;
    for ( std::size_t i = 0; i < pool.size() && mutations.size() < mutation_count; ++i )
        for ( std::size_t j = 0; j < pool[ i ].invariant.size() && mutations.size() < mutation_count; ++j )
            mutations.push_back( { i, { j } } );
    std::mt19937_64 rng{ 2024 };
    while ( mutations.size() < mutation_count && !pool.empty() )
    {
        const auto i = rng() % pool.size();
        std::vector< std::size_t > drop;
        for ( std::size_t j = 0; j < pool[ i ].invariant.size(); ++j )
            if ( rng() % 2 )
                drop.push_back( j );
        if ( !drop.empty() )
            mutations.push_back( { i, drop } );
    }

    std::size_t redundant = 0, rejected = 0, valid_weakening = 0, false_accepts = 0, false_rejects = 0;
    const auto mutant = dir / "mutant.json";
    for ( const auto& [ i, drop ] : mutations )
    {
        const auto& inst = pool[ i ];
        std::vector< clause > kept;
        for ( std::size_t j = 0; j < inst.invariant.size(); ++j )
            if ( std::find( drop.begin(), drop.end(), j ) == drop.end() )
                kept.push_back( inst.invariant[ j ] );
        std::ofstream( mutant ) << io::write_certificate( inst.sym, kept );
        const int code = cli( { "verify", "--model", inst.model_file.string(), "--certificate", mutant.string() } );
        const bool accepted = code == cli::exit_controlled;

        const bool same = semantics_of( inst.sym, kept ) == semantics_of( inst.sym, inst.invariant );
        const bool valid = same || explicitly_inductive( inst.sym, kept );
        if ( same )
            ++redundant;
        else if ( valid && accepted )
            ++valid_weakening;
        else if ( !valid && !accepted )
            ++rejected;
        if ( accepted && !valid )
        {
            ++false_accepts;
            v.fail( inst.name + ": invalid mutation accepted" );
        }
        if ( !accepted && valid )
        {
            ++false_rejects;
            v.fail( inst.name + ": valid mutation rejected (exit " + std::to_string( code ) + ")" );
        }
    }
    if ( mutations.size() < mutation_count )
        v.fail( "only " + std::to_string( mutations.size() ) + " mutations available" );
    v.detail << ( v.pass ? "" : "; " ) << mutations.size() << " deletions over " << pool.size() << " certificates: "
             << rejected << " semantic changes rejected, " << redundant << " redundant (accepted), " << valid_weakening
             << " weaker but still inductive (accepted); false accepts " << false_accepts << ", false rejects "
             << false_rejects;
    return v;
}

} // namespace

int main()
{
    const std::vector< std::pair< const char*, std::function< verdict() > > > criteria{
        { "fig1 guard strengthenings", fig1_guards },
        { "fig1 certificate", fig1_certificate },
        { "differential oracle suite", differential_suite },
        { "uncontrollable cone preservation", cone_preservation },
        { "encoding equivalence", encoding_equivalence },
        { "trace invariant audit", trace_audit },
        { "benchmarks at desk scale", benchmarks },
        { "certificate robustness", certificate_robustness },
    };
    int failures = 0;
    for ( std::size_t i = 0; i < criteria.size(); ++i )
    {
        verdict v;
        try
        {
            v = criteria[ i ].second();
        }
        catch ( const std::exception& e )
        {
            v.fail( std::string( "exception: " ) + e.what() );
        }
        failures += v.pass ? 0 : 1;
        std::cout << "criterion " << i + 1 << " [" << ( v.pass ? "PASS" : "FAIL" ) << "] " << criteria[ i ].first << ": "
                  << v.detail.str() << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
