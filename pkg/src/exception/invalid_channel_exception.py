class InvalidChannelException(Exception):
    pass
