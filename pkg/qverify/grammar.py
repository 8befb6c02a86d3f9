# qverify/grammar.py
# Lark grammar shared by HeyVL files, pGCL files and standalone formulas.
# Operators, loosest first: inf/sup < ==> <~~ < \/ < /\ < || < && < ! < comparisons
# < + - .- < * / < unary - < atoms.

GRAMMAR = r"""
// -----------------------------
// HeyVL
// -----------------------------
heyvl: heyvl_item*
?heyvl_item: domain | proc_decl

domain: "domain" NAME "{" domain_item* "}"
?domain_item: func_decl | axiom_decl | default_decl
func_decl: "func" NAME "(" [params] ")" ":" type_name ";"?
axiom_decl: "axiom" NAME [forall] expr ";"?
forall: "forall" params "."
default_decl: "default" expr ";"?

params: param ("," param)*
param: NAME ":" type_name
type_name: NAME

proc_decl: proc_kind NAME "(" [params] ")" "->" "(" [params] ")" spec_clause* [block]
!proc_kind: "proc" | "coproc"
?spec_clause: "pre" expr -> pre_clause
            | "post" expr -> post_clause

block: "{" stmt* "}"
?stmt: simple_stmt ";"?
     | if_stmt

?simple_stmt: var_decl
            | assign
            | call_stmt
            | "reward" expr -> reward
            | "assert" expr -> assert_stmt
            | "coassert" expr -> coassert_stmt
            | "assume" expr -> assume_stmt
            | "coassume" expr -> coassume_stmt
            | "havoc" names -> havoc
            | "cohavoc" names -> cohavoc
            | "validate" -> validate_stmt
            | "covalidate" -> covalidate_stmt

var_decl: "var" NAME ":" type_name ["=" rhs]
assign: names "=" rhs
call_stmt: NAME "(" [args] ")"
names: NAME ("," NAME)*

?rhs: expr
    | dist
    | "flip" "(" expr ")" -> flip
dist: dist_branch ("+" dist_branch)*
dist_branch: prod "*" "<" sum ">"

if_stmt: "if" "(" expr ")" block ["else" else_part] -> if_bool
       | "if" "demonic" block "else"? block -> demonic
       | "if" "angelic" block "else"? block -> angelic
?else_part: block | if_stmt

// -----------------------------
// pGCL
// -----------------------------
pgcl: pgcl_item*
?pgcl_item: domain
          | pvar_decl ";"?
          | annotation ";"?
          | pcmd

pvar_decl: "var" NAME ":" type_name
annotation: "@" annotation_name "(" [args] ")"
!annotation_name: NAME | "pre" | "post"

pblock: "{" pblock_item* "}"
?pblock_item: pcmd | annotation ";"?

?pcmd: NAME ":=" expr ";"? -> passign
     | "skip" ";"? -> pskip
     | "diverge" ";"? -> pdiverge
     | "observe" "(" expr ")" ";"? -> observe
     | "tick" "(" expr ")" ";"? -> tick
     | pblock "[" expr "]" pblock -> pchoice
     | pblock "[" "]" pblock -> ndchoice
     | pif
     | "while" "(" expr ")" pblock -> pwhile
pif: "if" "(" expr ")" pblock ["else" pelse]
?pelse: pblock | pif

// -----------------------------
// Expressions (terms and formulas)
// -----------------------------
formula: expr

?expr: impl | quant
quant: quant_kind NAME ":" type_name "." expr
!quant_kind: "inf" | "sup"

?impl: max_
     | max_ "==>" impl_rhs -> impl
     | max_ "<~~" impl_rhs -> coimpl
?impl_rhs: impl | quant

?max_: min_ | max_ "\\/" min_ -> max
?min_: or_ | min_ "/\\" or_ -> min
?or_: and_ | or_ "||" and_ -> or_
?and_: not_ | and_ "&&" not_ -> and_
?not_: cmp | "!" not_ -> not_

?cmp: sum
    | sum "<" sum -> lt
    | sum "<=" sum -> le
    | sum ">" sum -> gt
    | sum ">=" sum -> ge
    | sum "==" sum -> eq
    | sum "!=" sum -> ne

?sum: prod
    | sum "+" prod -> add
    | sum "-" prod -> sub
    | sum ".-" prod -> monus
?prod: unary
     | prod "*" unary -> mul
     | prod "/" unary -> div
?unary: atom | "-" unary -> neg

?atom: NUMBER -> number
     | "true" -> true
     | "false" -> false
     | "\\infty" -> infty
     | NAME -> var
     | NAME "(" [args] ")" -> apply
     | "(" expr ")"
     | "?(" expr ")" -> embed
     | "!?(" expr ")" -> coembed
     | "[" expr "]" -> iverson
     | "ite" "(" expr "," expr "," expr ")" -> ite
     | "\\validate" "(" expr ")" -> validate
     | "\\covalidate" "(" expr ")" -> covalidate
     | "\\neg" "(" expr ")" -> neg_formula
     | "\\coneg" "(" expr ")" -> coneg_formula

args: expr ("," expr)*

NAME: /[A-Za-z_][A-Za-z0-9_$']*/
NUMBER: /\d+(\.\d+)?/
COMMENT: /\/\/[^\n]*/

%import common.WS
%ignore WS
%ignore COMMENT
"""
