"""Exception hierarchy shared by every stage of the pipeline."""


class CnlError(Exception):
    """Base class for all errors raised by cnlreduce."""


# -- DRS core / notation ----------------------------------------------------

class DrsError(CnlError):
    pass


class DuplicateReferent(DrsError):
    def __init__(self, name):
        super().__init__(f"duplicate referent {name!r}")
        self.name = name


class ReferentClash(DrsError):
    def __init__(self, name):
        super().__init__(f"referent {name!r} declared on both sides of merge")
        self.name = name


class ImproperDrs(DrsError):
    def __init__(self, free=()):
        free = sorted(free)
        super().__init__(f"improper DRS, free referents: {', '.join(free)}")
        self.free = free


class DrsSyntaxError(DrsError):
    def __init__(self, line, column, expected, found=None):
        msg = f"line {line}, column {column}: expected {expected}"
        if found is not None:
            msg += f", found {found!r}"
        super().__init__(msg)
        self.line = line
        self.column = column
        self.expected = expected
        self.found = found


class UnknownPos(DrsSyntaxError):
    pass


class UnknownEntityClass(DrsSyntaxError):
    pass


class DuplicateId(DrsError):
    def __init__(self, ident):
        super().__init__(f"duplicate document id {ident!r}")
        self.ident = ident


# -- frontend ---------------------------------------------------------------

class FrontendError(CnlError):
    pass


class EmptyInput(FrontendError):
    def __init__(self):
        super().__init__("empty input")


class LexiconError(FrontendError):
    pass


class ParseFailure(FrontendError):
    def __init__(self, position, expected, found=None):
        msg = f"token {position}: expected {expected}"
        if found is not None:
            msg += f", found {found!r}"
        super().__init__(msg)
        self.position = position
        self.expected = expected
        self.found = found


class ValencyMismatch(FrontendError):
    def __init__(self, verb, expected, got, position=None):
        super().__init__(f"verb {verb!r} takes {expected} object(s), got {got}")
        self.verb = verb
        self.expected = expected
        self.got = got
        self.position = position


class UnknownToken(FrontendError):
    def __init__(self, token, position=None):
        super().__init__(f"unknown token {token!r}")
        self.token = token
        self.position = position


class NoAntecedent(FrontendError):
    def __init__(self, pronoun):
        super().__init__(f"no accessible antecedent for {pronoun!r}")
        self.pronoun = pronoun


# -- classifier -------------------------------------------------------------

class ClassifierError(CnlError):
    pass


class EmptyDataset(ClassifierError):
    def __init__(self):
        super().__init__("dataset is empty")


class InvalidHyper(ClassifierError):
    pass


class ModelFormatError(ClassifierError):
    pass


# -- rewriting --------------------------------------------------------------

class RewriteError(CnlError):
    pass


class RuleSyntaxError(RewriteError):
    def __init__(self, line, message):
        super().__init__(f"line {line}: {message}")
        self.line = line


class UnboundReplacementVar(RewriteError):
    def __init__(self, rule, var):
        super().__init__(f"rule {rule!r}: replacement variable {var} is neither matched nor fresh")
        self.rule = rule
        self.var = var


class FreshClash(RewriteError):
    def __init__(self, rule, var):
        super().__init__(f"rule {rule!r}: fresh variable {var} is also bound by the match")
        self.rule = rule
        self.var = var


class MetavariableRoleClash(RewriteError):
    def __init__(self, rule, var):
        super().__init__(f"rule {rule!r}: metavariable {var} used in more than one slot kind")
        self.rule = rule
        self.var = var


class IterationBudgetExceeded(RewriteError):
    def __init__(self, max_iterations):
        super().__init__(f"rewriting did not reach a fixpoint within {max_iterations} steps")
        self.max_iterations = max_iterations


class ImproperResult(RewriteError):
    def __init__(self, rule, free=()):
        super().__init__(f"rule {rule!r} produced an improper DRS (free: {', '.join(sorted(free))})")
        self.rule = rule
        self.free = sorted(free)


# -- ACE --------------------------------------------------------------------

class NotVerbalizable(CnlError):
    def __init__(self, reason):
        super().__init__(f"not verbalizable: {reason}")
        self.reason = reason


# -- logic ------------------------------------------------------------------

class LogicError(CnlError):
    pass


class QuestionNotTranslatable(LogicError):
    def __init__(self):
        super().__init__("wh-question boxes are only handled by answer_query")


class ArityMismatch(LogicError):
    def __init__(self, predicate, expected, got):
        super().__init__(f"predicate {predicate!r} used with arity {got}, interpreted with arity {expected}")
        self.predicate = predicate
        self.expected = expected
        self.got = got


class SearchSpaceTooLarge(LogicError):
    def __init__(self, size, bound):
        super().__init__(f"model search needs {size} interpretations, bound is {bound}")
        self.size = size
        self.bound = bound


class NotAQuestion(LogicError):
    def __init__(self):
        super().__init__("expected exactly one top-level wh-question condition")


class EmptyDomain(LogicError):
    def __init__(self, var, predicate):
        super().__init__(f"variable {var} is typed by {predicate!r}, which has an empty extension")
        self.var = var
        self.predicate = predicate


class UntypedVariable(LogicError):
    def __init__(self, var):
        super().__init__(f"variable {var} has no typing predicate")
        self.var = var


class UnsupportedConstruct(LogicError):
    pass


class FactsFormatError(LogicError):
    def __init__(self, line, message):
        super().__init__(f"line {line}: {message}")
        self.line = line


# -- pipeline ---------------------------------------------------------------

class ConfigError(CnlError):
    pass


class GoldFormatError(CnlError):
    def __init__(self, line, message):
        super().__init__(f"line {line}: {message}")
        self.line = line
