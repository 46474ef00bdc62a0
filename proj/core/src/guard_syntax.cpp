#include "pdrc/model.hpp"

#include <cctype>
#include <charconv>

namespace pdrc::model
{

namespace
{

std::string render( const guard& g, bool nested )
{
    return std::visit(
        [ & ]( const auto& n ) -> std::string {
            using T = std::decay_t< decltype( n ) >;
            if constexpr ( std::is_same_v< T, guard::constant > )
                return n.value ? "true" : "false";
            else if constexpr ( std::is_same_v< T, guard::var_atom > )
                return n.var + " " + std::string{ to_string( n.op ) } + " " + std::to_string( n.value );
            else if constexpr ( std::is_same_v< T, guard::loc_atom > )
                return n.automaton + "@" + n.location;
            else if constexpr ( std::is_same_v< T, guard::negation > )
            {
                const bool atomic = !std::holds_alternative< guard::junction >( n.child.get() ) &&
                                    !std::holds_alternative< guard::var_atom >( n.child.get() );
                const auto inner = render( n.child, false );
                return atomic ? "!" + inner : "!(" + inner + ")";
            }
            else
            {
                std::string out;
                const char* sep = n.conjunction ? " && " : " || ";
                for ( std::size_t i = 0; i < n.children.size(); ++i )
                {
                    if ( i )
                        out += sep;
                    out += render( n.children[ i ], true );
                }
                return nested ? "(" + out + ")" : out;
            }
        },
        g.get() );
}

class guard_parser
{
public:
    explicit guard_parser( std::string_view text ) : _text{ text } {}

    guard parse()
    {
        auto g = disjunction();
        skip_space();
        if ( _pos != _text.size() )
            fail( "unexpected trailing input" );
        return g;
    }

private:
    [[noreturn]] void fail( const std::string& what ) const
    {
        throw model_error( "guard syntax error at offset " + std::to_string( _pos ) + ": " + what + " in '" +
                           std::string{ _text } + "'" );
    }

    void skip_space()
    {
        while ( _pos < _text.size() && std::isspace( static_cast< unsigned char >( _text[ _pos ] ) ) )
            ++_pos;
    }

    bool accept( std::string_view token )
    {
        skip_space();
        if ( _text.substr( _pos, token.size() ) == token )
        {
            _pos += token.size();
            return true;
        }
        return false;
    }

    guard disjunction()
    {
        std::vector< guard > parts{ conjunction() };
        while ( accept( "||" ) )
            parts.push_back( conjunction() );
        return parts.size() == 1 ? parts.front() : guard::any_of( std::move( parts ) );
    }

    guard conjunction()
    {
        std::vector< guard > parts{ unary() };
        while ( accept( "&&" ) )
            parts.push_back( unary() );
        return parts.size() == 1 ? parts.front() : guard::all_of( std::move( parts ) );
    }

    guard unary()
    {
        skip_space();
        if ( accept( "!" ) )
        {
            if ( _pos < _text.size() && _text[ _pos ] == '=' )
                fail( "unexpected '='" );
            return !unary();
        }
        if ( accept( "(" ) )
        {
            auto g = disjunction();
            if ( !accept( ")" ) )
                fail( "expected ')'" );
            return g;
        }
        return atom();
    }

    std::string identifier()
    {
        skip_space();
        const auto start = _pos;
        if ( _pos < _text.size() &&
             ( std::isalpha( static_cast< unsigned char >( _text[ _pos ] ) ) || _text[ _pos ] == '_' ) )
        {
            ++_pos;
            while ( _pos < _text.size() && ( std::isalnum( static_cast< unsigned char >( _text[ _pos ] ) ) ||
                                             _text[ _pos ] == '_' || _text[ _pos ] == '.' ) )
                ++_pos;
        }
        if ( start == _pos )
            fail( "expected identifier" );
        return std::string{ _text.substr( start, _pos - start ) };
    }

    long integer()
    {
        skip_space();
        long value = 0;
        const auto* first = _text.data() + _pos;
        const auto* last = _text.data() + _text.size();
        const auto [ ptr, ec ] = std::from_chars( first, last, value );
        if ( ec == std::errc::result_out_of_range )
            fail( "integer out of range" );
        if ( ec != std::errc{} )
            fail( "expected integer" );
        _pos += static_cast< std::size_t >( ptr - first );
        return value;
    }

    guard atom()
    {
        const auto name = identifier();
        if ( name == "true" )
            return guard::truth();
        if ( name == "false" )
            return guard::falsity();
        if ( accept( "@" ) )
            return guard::at( name, identifier() );

        static constexpr std::pair< std::string_view, cmp_op > ops[] = {
            { "==", cmp_op::eq }, { "!=", cmp_op::ne }, { "<=", cmp_op::le },
            { ">=", cmp_op::ge }, { "<", cmp_op::lt },  { ">", cmp_op::gt },
        };
        for ( const auto& [ token, op ] : ops )
            if ( accept( token ) )
                return guard::compare( name, op, integer() );
        fail( "expected comparison operator" );
    }

    std::string_view _text;
    std::size_t _pos = 0;
};

} // namespace

std::string to_string( const guard& g ) { return render( g, false ); }

guard parse_guard( std::string_view text ) { return guard_parser{ text }.parse(); }

update parse_update( std::string var, std::string_view rhs )
{
    auto trim = []( std::string_view s ) {
        while ( !s.empty() && std::isspace( static_cast< unsigned char >( s.front() ) ) )
            s.remove_prefix( 1 );
        while ( !s.empty() && std::isspace( static_cast< unsigned char >( s.back() ) ) )
            s.remove_suffix( 1 );
        return s;
    };
    auto parse_int = [ & ]( std::string_view s ) {
        s = trim( s );
        long v = 0;
        const auto [ ptr, ec ] = std::from_chars( s.data(), s.data() + s.size(), v );
        if ( ec != std::errc{} || ptr != s.data() + s.size() )
            throw model_error( "invalid update '" + std::string{ rhs } + "' for variable '" + var + "'" );
        return v;
    };

    rhs = trim( rhs );
    if ( rhs.empty() )
        throw model_error( "empty update for variable '" + var + "'" );
    if ( std::isdigit( static_cast< unsigned char >( rhs.front() ) ) || rhs.front() == '-' )
        return update::assign( std::move( var ), parse_int( rhs ) );

    if ( rhs.substr( 0, var.size() ) != var )
        throw model_error( "update of '" + var + "' may only refer to '" + var + "' itself: '" + std::string{ rhs } + "'" );
    auto rest = trim( rhs.substr( var.size() ) );
    if ( rest.empty() )
        return { std::move( var ), update::kind::keep, 0 };
    if ( rest.front() == '+' )
        return update::add( std::move( var ), parse_int( rest.substr( 1 ) ) );
    if ( rest.front() == '-' )
        return update::add( std::move( var ), -parse_int( rest.substr( 1 ) ) );
    throw model_error( "invalid update '" + std::string{ rhs } + "' for variable '" + var + "'" );
}

} // namespace pdrc::model
